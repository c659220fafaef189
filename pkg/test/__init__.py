"""Tests for the detector-network simulator."""
