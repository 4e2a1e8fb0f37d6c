"""Revenue bounds toolkit."""
