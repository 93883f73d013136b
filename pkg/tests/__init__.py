"""qdob test package."""
