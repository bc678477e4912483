"""
encprim Test Suite
"""
