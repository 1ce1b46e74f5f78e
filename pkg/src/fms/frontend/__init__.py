from fms.frontend.parser import parse
from fms.frontend.desugar import Desugarer, desugar, desugar_decl, desugar_source

__all__ = ["parse", "desugar", "desugar_decl", "desugar_source", "Desugarer"]
