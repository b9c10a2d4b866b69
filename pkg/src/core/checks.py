# src/core/checks.py
"""
System checks for the sampler settings.
"""

from django.conf import settings
from django.core.checks import Error, Warning, register

POSITIVE_SETTINGS = ("ENUMERATION_GUARD", "DEFAULT_BINS", "MAX_SEED_RETRIES", "WORKERS")


@register()
def check_cyclewalk_settings(app_configs, **kwargs):
    """Check sampler settings are usable."""
    errors = []
    options = getattr(settings, "CYCLEWALK", None)
    if options is None:
        return [Error("CYCLEWALK settings are missing", id="cyclewalk.E001")]

    for key in POSITIVE_SETTINGS:
        value = options.get(key)
        if not isinstance(value, int) or value < 1:
            errors.append(
                Error(
                    f"CYCLEWALK['{key}'] must be a positive integer, got {value!r}",
                    id="cyclewalk.E002",
                )
            )

    if options.get("AUDIT_EVERY", 0) < 0:
        errors.append(
            Error("CYCLEWALK['AUDIT_EVERY'] must be >= 0", id="cyclewalk.E003")
        )

    if options.get("ENUMERATION_GUARD", 0) > 64:
        errors.append(
            Warning(
                "Exhaustive enumeration above 64 vertices will not finish",
                id="cyclewalk.W001",
            )
        )

    return errors


@register()
def check_bundled_graphs(app_configs, **kwargs):
    """Validate every graph file listed in CYCLEWALK['CHECK_GRAPHS']."""
    from core.exceptions import GraphLoadError
    from graphs.loaders import load_graph_file
    from graphs.validation import validate

    errors = []
    for path in settings.CYCLEWALK.get("CHECK_GRAPHS", []):
        try:
            graph = load_graph_file(path)
        except (OSError, GraphLoadError) as e:
            errors.append(Error(f"{path}: {str(e)}", id="cyclewalk.E010"))
            continue
        for violation in validate(graph):
            errors.append(Error(f"{path}: {violation}", id="cyclewalk.E011"))
    return errors
