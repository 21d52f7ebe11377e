"""Gröbner run statistics."""

from pydantic import BaseModel, Field


class GroebnerStats(BaseModel):
    """Counters collected by one Gröbner basis computation."""

    method: str = Field("native", description="Backend that computed the basis", examples=["native", "f5b"])
    variables: int = Field(0, description="Number of ring variables", ge=0)
    generators: int = Field(0, description="Number of input generators", ge=0)
    pairs_created: int = Field(0, description="S-pairs kept after the pair criteria", ge=0)
    pairs_reduced: int = Field(0, description="S-pairs actually reduced", ge=0)
    zero_reductions: int = Field(0, description="S-pairs that reduced to zero", ge=0)
    basis_size: int = Field(0, description="Size of the final reduced basis", ge=0)
    max_coeff_bits: int = Field(0, description="Largest coefficient bit-size seen", ge=0)
    elapsed_s: float = Field(0.0, description="Wall-clock time in seconds", ge=0)
