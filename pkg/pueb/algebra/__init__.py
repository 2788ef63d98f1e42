"""Finite fields and Schwinger operator algebra."""
