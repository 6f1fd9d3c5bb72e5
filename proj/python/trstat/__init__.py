"""Time-reversal imaging statistics."""

from ._trstat import (
    ConfigError,
    NumericalError,
    Scenario,
    TrstatError,
    average_maps,
    complex_chi2_cdf,
    complex_f_cdf,
    complex_f_pdf,
    gm,
    glr,
    green,
    hm,
    ks_one_sample,
    ks_two_sample,
    load_config,
    mis,
    noncentrality,
    paper_scenario,
    rao,
    render_map,
    run_cli,
    run_seed,
    steering,
    synthesize,
    wald,
    xi,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "Scenario",
    "TrstatError",
    "average_maps",
    "complex_chi2_cdf",
    "complex_f_cdf",
    "complex_f_pdf",
    "gm",
    "glr",
    "green",
    "hm",
    "ks_one_sample",
    "ks_two_sample",
    "load_config",
    "mis",
    "noncentrality",
    "paper_scenario",
    "rao",
    "render_map",
    "run_cli",
    "run_seed",
    "steering",
    "synthesize",
    "wald",
    "xi",
]
