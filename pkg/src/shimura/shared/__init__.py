"""Shared plumbing: logging, configuration and error types."""
