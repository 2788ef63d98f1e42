"""Single-particle MUB and two-particle entangled bases."""
