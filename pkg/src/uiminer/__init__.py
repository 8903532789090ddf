"""Static miner for Android GUI models.

Reconstructs screens, widget trees, labels, callback bindings, and
per-widget API call sets from an APK's binary resources plus app code
in a textual three-address form.
"""

__version__ = "0.1.0"
