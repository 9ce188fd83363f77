"""Configuration files used by the CLI and config parser tests."""
