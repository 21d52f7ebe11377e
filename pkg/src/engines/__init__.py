from src.engines.multivariate import arithmetic_multi
from src.engines.seriescheck import certify
from src.engines.univariate import arithmetic_uni, unary_uni

__all__ = ["arithmetic_multi", "arithmetic_uni", "certify", "unary_uni"]
