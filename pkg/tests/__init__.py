"""
Package de tests pour learnlab
"""
