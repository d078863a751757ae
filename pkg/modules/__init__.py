# Two-Point Expansions - Modules Package

from . import expressions
from . import jets
from . import two_point_taylor
from . import two_point_laurent
from . import contour_oracle
from . import regions
from . import verification
