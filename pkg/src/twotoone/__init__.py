"""Two-to-one mappings over finite fields."""
