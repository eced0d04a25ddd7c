"""Pick the compiled quadrature core if it was built, else the Python one.

Set ATOMCBS_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _pyquad

python = _pyquad
compiled = None

if os.environ.get("ATOMCBS_PURE_PYTHON", "") not in ("", "0"):
    active = _pyquad
else:
    try:
        from . import _speedups as compiled
    except ImportError:
        active = _pyquad
    else:
        active = compiled

NAME = "compiled" if active is compiled else "python"
