from django.apps import AppConfig


class EnumeratorConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'enumerator'
    verbose_name = 'Exact Partition Enumeration'
