"""DFA sequence classifiers learned by exact discrete optimization.

Per-class binary DFAs are learned by assigning automaton states to the
nodes of a cost-annotated prefix tree and solving the resulting 0-1
program exactly; an ensemble of such DFAs yields a posterior over
class labels for (early) multi-class prediction.  Because the learned
classifiers are plain DFAs, the package also offers regular-language
interpretability services: counterfactual explanations, natural
language narration, property verification, classifier modification,
and regex extraction.
"""

from .dfa import DfaModel, complement, extract_regex, find_accepted_witness, product
from .errors import DataError, InternalError, SchemaError, SeqDfaError, UnknownSymbolError
from .inference import ClassifierEnsemble, Posterior, estimate_likelihoods, posterior, predict, predict_prefixes
from .learn import (
    AssignmentProgram,
    HyperParams,
    SolveResult,
    StateLayout,
    build_program,
    decode,
    export_lp,
    solve,
    train_class_dfa,
    validate_select,
)
from .prefix_tree import PrefixTree, build_prefix_tree, cost_accept, cost_reject
from .traces import Alphabet, LabeledDataset, binarize, load_dataset, split_train_validation

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AssignmentProgram",
    "ClassifierEnsemble",
    "DataError",
    "DfaModel",
    "HyperParams",
    "InternalError",
    "LabeledDataset",
    "Posterior",
    "PrefixTree",
    "SchemaError",
    "SeqDfaError",
    "SolveResult",
    "StateLayout",
    "UnknownSymbolError",
    "binarize",
    "build_prefix_tree",
    "build_program",
    "complement",
    "cost_accept",
    "cost_reject",
    "decode",
    "estimate_likelihoods",
    "export_lp",
    "extract_regex",
    "find_accepted_witness",
    "load_dataset",
    "posterior",
    "predict",
    "predict_prefixes",
    "product",
    "solve",
    "split_train_validation",
    "train_class_dfa",
    "validate_select",
    "__version__",
]
