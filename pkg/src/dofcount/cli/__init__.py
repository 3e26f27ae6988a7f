"""Command-line front end and document formats."""
