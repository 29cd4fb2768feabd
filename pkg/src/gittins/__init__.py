"""Finite-horizon Gaussian Gittins indices, bandit policies and experiments."""

from .approx import ApproxParams, approx_gittins, beta
from .bayes2 import (BayesState, TwoArmedBayes, bayes_threshold_n2,
                     closed_form_n2, gittins_threshold_n2)
from .engine import (AccuracyError, GittinsEngine, IndexQuery, Posterior,
                     ValueFunction, bellman_backup, gittins_index, index_curve,
                     index_zero_root, noise_variance, posterior_update)
from .gaussian import PiecewiseQuad, expect_gauss, fit_adaptive
from .policies import PolicyKind, PolicySpec, PolicyState, observe, select_arm
from .sim import (BanditInstance, SweepConfig, SweepResult, episode_rng,
                  estimate_regret, run_episode, run_sweep, write_sweep)
from .table import IndexTable, build_table, load_table, save_table
from .verify import (MCCheckReport, StoppingRule, check_f_beta,
                     check_scale_bracket, f_beta, mc_expected_tau,
                     mc_gaussian_tails, stopping_time)

__version__ = "0.1.0"
