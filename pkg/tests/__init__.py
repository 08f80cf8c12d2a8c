"""Tests for snarkbound."""
