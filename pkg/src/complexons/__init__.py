"""Dense simplicial complexes and their limits (complexons)."""

__version__ = "0.1.0"

from .simplicial import (  # noqa: E402
    Hypergraph,
    SimplicialComplex,
    WeightedComplex,
    antifacets,
    blowup,
    canonical_form,
    enumerate_complexes,
    facets,
    from_facets,
    induced_subcomplex,
    isomorphism_classes,
    lower_closure,
    upper_closure,
)
from .complexon import (  # noqa: E402
    CechCurveComplexon,
    Complexon,
    FacetedComplexon,
    HomogeneousComplexon,
    StepComplexon,
    WeightSequence,
    apply_block_permutation,
    bouquet_curve,
    cech_complexon,
    facet_complexon,
    pixel_complexon,
    project,
    refine_to_common,
)
from .homomorphism import (  # noqa: E402
    DensityResult,
    hom_count,
    ind_count,
    t_hom,
    t_hom_complexon,
    t_hom_faceted,
    t_hom_hypergraph,
    t_ind_by_inclusion_exclusion,
    t_ind_complexon,
    t_ind_finite,
)
from .cutnorm import (  # noqa: E402
    CutValue,
    MultiArray,
    counting_lemma_lower_bound,
    cut_norm_exact,
    cut_norm_heuristic,
    d_cut,
    d_cut_d,
    delta_cut,
    delta_cut_complexes,
    disjoint_cut_sup,
    equipartition_adjust,
    one_sided_cut_norm,
    weak_regularity_partition,
)
from .sampling import (  # noqa: E402
    SampleRecord,
    costa_farber,
    flag,
    linial_meshulam,
    sample_complex,
    sample_from_weighted,
    sample_hypergraph,
    weighted_from_points,
)
