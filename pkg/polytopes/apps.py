from django.apps import AppConfig


class PolytopesConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "polytopes"
    verbose_name = "Chiral and directly regular polytopes"
