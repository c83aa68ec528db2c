"""Tests for cheb-jacobi."""
