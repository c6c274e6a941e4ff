"""Generators, cross-validation suite, benchmarks and CLI."""
