"""Unit tests for utils package."""
