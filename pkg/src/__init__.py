"""Certified interval enclosures for linear constraint systems."""
