"""Class-partitioned multi-object tracking core."""

try:
    from ._classtrack import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # pragma: no cover - build-tree layout
    from _classtrack import *  # noqa: F401,F403
