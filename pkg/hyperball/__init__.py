from . import exceptions
from .registry import InvariantRegistry
__instance__ = InvariantRegistry.getInstance()
from . import builtins
from . import types
