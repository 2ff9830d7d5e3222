"""A two-level probabilistic calculus with exact matrix semantics.

The kernel language programs Markov kernels; the linear lambda calculus
programs measure transformers where "using a variable once" means
"sampling from it once"; ``sample`` bridges the two.  Everything
denotes an exact rational (or boolean) matrix, an operational oracle
cross-checks every ground-type denotation, coherence-space analysis
validates the linear denotations, and a seeded law suite re-proves the
equational theory on demand.
"""

from .denot import (
    denote_def,
    denote_ll,
    denote_mk,
    denote_mk_type,
    distribution,
    format_distribution,
    observe_denote,
    web_index,
)
from .gen import GenConfig, TermGen, default_program
from .laws import LawReport, run_laws
from .matrix import BOOL, PROB, FinSet, Matrix, SizeCapError
from .oracle import TraceDist, enumerate_dist, mc_sample
from .pcoh import (
    NotAKernelError,
    Web,
    check_bipolar_closed,
    check_pcoh_morphism,
    member,
    polar,
    reify_kernel,
    web_lolli,
    web_meas,
    web_tensor,
)
from .surface import ParseError, Program, parse_program, pretty_print
from .syntax import alpha_eq, free_vars, subst_ll, subst_mk
from .typecheck import TypeCheckError, typecheck_ll, typecheck_mk

__version__ = "0.1.0"

__all__ = [
    "BOOL",
    "FinSet",
    "GenConfig",
    "LawReport",
    "Matrix",
    "NotAKernelError",
    "PROB",
    "ParseError",
    "Program",
    "SizeCapError",
    "TermGen",
    "TraceDist",
    "TypeCheckError",
    "Web",
    "alpha_eq",
    "check_bipolar_closed",
    "check_pcoh_morphism",
    "default_program",
    "denote_def",
    "denote_ll",
    "denote_mk",
    "denote_mk_type",
    "distribution",
    "enumerate_dist",
    "format_distribution",
    "free_vars",
    "mc_sample",
    "member",
    "observe_denote",
    "parse_program",
    "polar",
    "pretty_print",
    "reify_kernel",
    "run_laws",
    "subst_ll",
    "subst_mk",
    "typecheck_ll",
    "typecheck_mk",
    "web_index",
    "web_lolli",
    "web_meas",
    "web_tensor",
]
