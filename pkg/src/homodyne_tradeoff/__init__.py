"""Information/disturbance and estimation/distortion trade-offs of a
feed-forward double-homodyne measurement scheme."""

__version__ = "0.1.0"
