# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The harqris Authors
"""Outage analysis of HARQ over multi-RIS Rician channels."""

from ._harqris import (
    ChannelStats,
    ConfigError,
    DomainError,
    Error,
    FitError,
    NumericError,
    Scenario,
    Scheme,
    TruncationError,
    __version__,
    asymptotic_outage,
    coding_gain,
    exact_curve,
    fit_diversity,
    gain_cdf,
    outage,
    outage_threshold,
    parse_scheme,
    poisson_gamma_mixture,
    reg_lower_gamma,
    reg_upper_gamma,
    run,
    snr_offset_factor,
    subcommands,
    sum_gain_cdf,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
