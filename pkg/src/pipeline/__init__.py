"""Command-line front-end, configuration and run orchestration."""
