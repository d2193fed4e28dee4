"""
Tests package for koenigs.
"""
