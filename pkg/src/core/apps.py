from django.apps import AppConfig


class CoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'core'
    verbose_name = 'Cycle Walk Core'

    def ready(self):
        # Register system checks for the CYCLEWALK settings
        from core import checks  # noqa: F401
