"""
FloatForge Test Suite

Run tests with: pytest tests/ -v
Acceptance runs: pytest tests/ -v -m slow
"""
