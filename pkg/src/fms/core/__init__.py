"""The Core intermediate language."""

from fms.core.ast import *  # noqa: F401,F403
from fms.core.names import GEN_MARK, NameSupply, fresh_name  # noqa: F401
from fms.core.ops import alpha_equal, free_vars, substitute  # noqa: F401
from fms.core.pretty import pretty  # noqa: F401
