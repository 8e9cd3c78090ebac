"""Cobordism groups of cusp maps from stable stems: finite abelian groups,
the prim spectral sequence, and exact checks of the normal-form geometry."""

from .fga import FinAbGroup, GroupHom, Localization, smith_normal_form
from .stems import StemTable, default_table, load_stem_table
from .ss_engine import (
    cusp_cob_sequence,
    e_infinity,
    page,
    prim_cusp_3primary,
    prim_fold_group,
)
from .verify import verify_appendix1, verify_appendix2

__version__ = "0.1.0"
