"""Unit tests packages."""
