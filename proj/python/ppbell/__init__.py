"""Positive-P phase-space simulation of Bell-inequality violations."""

from ._ppbell import (
    ConfigError,
    EstimatorError,
    NumericalError,
    SamplerError,
    UnstableDenominator,
    __version__,
    correlation_E,
    fock_s_ch,
    fock_s_chd,
    fock_s_chsh,
    g_exact,
    pdc_marginal_exact,
    pdc_number_exact,
    pdc_s_chd_exact,
    prob_marginal,
    run_dynamic,
    run_selftest,
    run_static_chd,
    run_waveguide,
    s_ch,
    s_chd,
    s_chd_exact,
    s_chsh,
    sample_static,
    simulate,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
