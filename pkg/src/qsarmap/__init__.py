"""Pre-processing and low-dimensional mapping of QSAR descriptor tables."""

from importlib import resources

from .analysis import SeparabilityReport, compare_methods
from .dataset import (
    DescriptorTable,
    EndpointLabeling,
    deduplicate,
    label,
    load_csv,
    mean_threshold,
    normalize,
)
from .embedding import Embedding
from .exceptions import (
    ConvergenceError,
    DatasetError,
    DegenerateLabelingError,
    QsarmapError,
    TrainingDivergedError,
)

__version__ = "0.1.0"

FIXTURES = {
    "carcinogenicity": ("carcinogenicity.csv", "ActivityScore"),
    "hept": ("hept_like.csv", "pIC50"),
}


def fixture_path(name):
    """Path of a shipped fixture CSV: ``"carcinogenicity"`` or ``"hept"``."""
    return resources.files(__package__) / "data" / FIXTURES[name][0]


def load_fixture(name):
    filename, endpoint = FIXTURES[name]
    return load_csv(fixture_path(name), endpoint)
