"""Learning-augmented algorithms and the experiment harness around them."""

__version__ = "0.1.0"
