"""
Test suite for the co-presence monitor.
"""
