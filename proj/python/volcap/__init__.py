from ._core import (
    CapacityFit,
    CapacityResult,
    ConditionReport,
    MatrixFunction,
    SignFit,
    SkewFactorization,
    SpectrumResult,
    VolcapError,
    build_Aj,
    counting_function,
    exact_spectrum,
    fit_capacity,
    galerkin_spectrum,
    gauge_equivalent,
    glc_check,
    goh_check,
    gram,
    hessian_bound,
    hstack,
    legendre_rescaled,
    merge_direct_sum,
    predict_capacity,
    realize_lq,
    run,
    skew_factorize,
    vstack,
)

__all__ = [name for name in dir() if not name.startswith("_")]
