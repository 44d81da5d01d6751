"""Resource-breaking quantum channels for dense coding and teleportation."""

__version__ = "0.1.0"
