"""flat-lab: invariants of flat bundles and proper affine actions.

Euler numbers of surface-group representations via lifts of circle actions,
Milnor/Wood/Benzecri estimates, Margulis invariants and sign spectra of
affine deformations of Fuchsian groups, crooked planes and Drumm slabs in
Minkowski 3-space, and the exact integral Sp(4) example.
"""

__version__ = "0.1.0"

from .lorentz import (
    BoostFrame,
    CausalClass,
    LorentzIsometry,
    LorentzVector,
    NotHyperbolic,
    SL2Class,
    SL2Matrix,
    bilinear_form,
    boost_frame,
    causal_class,
    classify_sl2,
    geodesic_length,
    sl2_to_so21,
    xz_boost,
)
from .words import (
    AffineDeformation,
    AffineMap,
    IndexOutOfRange,
    Representation,
    RepKind,
    Word,
    WrongGeneratorCount,
    enumerate_words,
    evaluate,
    evaluate_affine,
    reduce,
    relator_word,
    surface_relator_defect,
)
from .euler import (
    DegenerateVertex,
    EulerMode,
    EulerReport,
    LiftedElement,
    NonIntegralLift,
    RelatorFailed,
    SubdivisionLimit,
    benzecri_defect,
    circle_angle,
    compose_word,
    euler_number,
    lift_track,
    milnor_estimate_defect,
    translation_number,
    turning_number,
    wood_bound_check,
    word_lift,
)
from .margulis import (
    InvariantRecord,
    SignSpectrum,
    Verdict,
    boost_normal_form,
    conjugacy_class_representatives,
    length_derivative_check,
    lorentz_cross_matrix,
    margulis_invariant,
    sign_spectrum,
    standard_boost,
)
from .crooked import (
    CrookedHalfspace,
    CrookedPlane,
    DepthExceeded,
    NotSpacelike,
    OrbitRecovery,
    Side,
    classify_point,
    crooked_disjoint_sampled,
    drumm_slab,
    make_crooked_plane,
    slab_recover,
    slice_polylines,
    transform_plane,
)
from .sp4 import (
    BadDeterminant,
    NonSymmetricTranslation,
    NotAffineChart,
    NotSymmetric,
    Sp4Affine,
    Sp4ExampleParams,
    Sp4Matrix,
    arithmetic_example,
    block_embed,
    make_shear,
    sp4_to_affine,
    symplectic_check,
)
