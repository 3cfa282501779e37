"""Loaders, serializers, report tables and HTTP helpers shared by the CLI and the routes."""
