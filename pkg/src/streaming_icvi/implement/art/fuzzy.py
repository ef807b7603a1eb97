from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np
from typing_extensions import override

from streaming_icvi import exception as te
from streaming_icvi.core.const import DEFAULT_ALPHA, DEFAULT_BETA
from streaming_icvi.core.types import ArtMode, Assignment
from streaming_icvi.interface.clusterer import ClustererProtocol
from streaming_icvi.log import get_logger
from streaming_icvi.model import ArtNetworkDocument, ArtSettings

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from streaming_icvi.core.types import ArtModeLiteral, Matrix, Vector

__all__ = ["FuzzyArt", "complement_code"]

logger = get_logger()


def complement_code(x: Any) -> Vector:
    """Concatenate `x` with `1 - x`.

    Args:
        x: sample (or rows of samples) with components in [0, 1].

    Returns:
        coded input of twice the dimension; its L1 norm equals `d`
    """
    sample = np.asarray(x, dtype=np.float64)
    if sample.ndim not in (1, 2) or sample.shape[-1] == 0:
        error_msg = f"cannot complement code an array of shape {sample.shape}"
        raise te.IcviDimensionError(error_msg)
    if not np.all((sample >= 0.0) & (sample <= 1.0)):
        error_msg = "complement coding needs components in [0, 1]; normalize first"
        raise te.IcviRangeError(error_msg)
    return np.concatenate([sample, 1.0 - sample], axis=-1)


def _choose(activation: Vector, passed: NDArray[np.bool_]) -> int:
    """Best category among those passing vigilance, else the most activated.

    Ties go to the lowest index, which matches scanning the categories in
    stable descending order of activation.
    """
    if passed.any():
        return int(np.argmax(np.where(passed, activation, -np.inf)))
    return int(np.argmax(activation))


class FuzzyArt(ClustererProtocol):
    """Fuzzy ART network over complement-coded inputs.

    Args:
        rho: vigilance in [0, 1]; larger values give more, smaller categories.
        alpha: choice parameter, > 0.
        beta: learning rate in (0, 1]; 1 is fast learning.
        mode: training creates and updates categories; evaluation never does.
    """

    def __init__(
        self,
        rho: float,
        *,
        alpha: float = DEFAULT_ALPHA,
        beta: float = DEFAULT_BETA,
        mode: ArtMode | ArtModeLiteral = ArtMode.TRAINING,
    ) -> None:
        self.settings = ArtSettings(rho=rho, alpha=alpha, beta=beta)
        self._mode = ArtMode(mode)
        self.weights: Matrix = np.zeros((0, 0))

    @classmethod
    def from_settings(
        cls,
        settings: ArtSettings,
        *,
        mode: ArtMode | ArtModeLiteral = ArtMode.TRAINING,
    ) -> FuzzyArt:
        return cls(settings.rho, alpha=settings.alpha, beta=settings.beta, mode=mode)

    @property
    @override
    def mode(self) -> ArtMode:
        return self._mode

    @mode.setter
    def mode(self, value: ArtMode | ArtModeLiteral) -> None:
        self._mode = ArtMode(value)

    @property
    @override
    def n_clusters(self) -> int:
        return self.weights.shape[0]

    @property
    def rho(self) -> float:
        return self.settings.rho

    def activation(self, coded: Vector) -> Vector:
        """Choice values `|min(I, w_j)| / (alpha + |w_j|)` of every category."""
        return self.match(coded) / (self.settings.alpha + self.weights.sum(axis=1))

    def match(self, coded: Vector) -> Vector:
        """Match values `|min(I, w_j)|` of every category."""
        return np.minimum(coded, self.weights).sum(axis=1)

    def ranking(self, coded: Vector) -> NDArray[np.intp]:
        """Categories by decreasing activation; ties keep index order."""
        return np.argsort(-self.activation(coded), kind="stable")

    def present(self, coded: Any, *, rho: float | None = None) -> Assignment:
        """Present one complement-coded input.

        In training mode the most activated category passing vigilance learns
        the input, and a new category is created when none passes. In
        evaluation mode nothing changes and the most activated category is
        returned when none passes.

        Args:
            coded: complement-coded input.
            rho: vigilance overriding the network's own for this presentation.

        Returns:
            the chosen category and whether it was created
        """
        sample = self._check_input(coded)
        if self.n_clusters == 0:
            if self._mode is ArtMode.EVALUATION:
                raise te.IcviStateError("cannot evaluate an empty network")
            return Assignment(self.add_category(sample), created=True)

        activation = self.activation(sample)
        passed = self._passed(sample, rho)
        if self._mode is ArtMode.EVALUATION:
            return Assignment(_choose(activation, passed), created=False)
        if not passed.any():
            return Assignment(self.add_category(sample), created=True)
        winner = _choose(activation, passed)
        self.learn(winner, sample)
        return Assignment(winner, created=False)

    def predict(self, coded: Any, *, exclude: int | None = None) -> int | None:
        """Evaluation-mode winner, leaving the network untouched.

        Args:
            coded: complement-coded input.
            exclude: category left out of the competition.

        Returns:
            the winning category, or `None` when no category competes
        """
        if self.n_clusters == 0:
            raise te.IcviStateError("cannot evaluate an empty network")
        sample = self._check_input(coded)
        activation = self.activation(sample)
        passed = self._passed(sample, None)
        if exclude is not None:
            activation[exclude] = -np.inf
            passed[exclude] = False
        if not np.isfinite(activation).any():
            return None
        return _choose(activation, passed)

    def winners_batch(
        self, coded: Matrix
    ) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        """Evaluation-mode first and second winners of many inputs.

        The second winner is the winner once the first is left out; it is
        `-1` when the network holds a single category.

        Args:
            coded: complement-coded inputs, one per row.

        Returns:
            first and second winners, one per row
        """
        coded = np.atleast_2d(np.asarray(coded, dtype=np.float64))
        if self.n_clusters == 0:
            raise te.IcviStateError("cannot evaluate an empty network")
        match = np.minimum(coded[:, None, :], self.weights[None, :, :]).sum(axis=2)
        activation = match / (self.settings.alpha + self.weights.sum(axis=1))
        passed = match >= self.rho * coded.sum(axis=1, keepdims=True)

        first = _choose_rows(activation, passed)
        rows = np.arange(coded.shape[0])
        if self.n_clusters == 1:
            return first, np.full_like(first, -1)
        activation[rows, first] = -np.inf
        passed[rows, first] = False
        return first, _choose_rows(activation, passed)

    def add_category(self, coded: Vector) -> int:
        """Append a category whose weight is the input."""
        if self.n_clusters == 0:
            self.weights = coded[None, :].copy()
        else:
            self.weights = np.vstack([self.weights, coded])
        category = self.n_clusters - 1
        logger.debug("category %d created (rho=%.4f)", category, self.rho)
        return category

    def learn(self, category: int, coded: Vector) -> None:
        """Move a category towards the input: `beta * min(I, w) + (1 - beta) * w`."""
        beta = self.settings.beta
        weight = self.weights[category]
        learned = np.minimum(coded, weight)
        self.weights[category] = beta * learned + (1.0 - beta) * weight

    @override
    def label(self, x: Any) -> int:
        return self.present(complement_code(x)).category

    @override
    def model_dump(self) -> dict[str, Any]:
        return self.document().model_dump(mode="json")

    def document(self) -> ArtNetworkDocument:
        return ArtNetworkDocument(settings=self.settings, weights=self.weights.tolist())

    @classmethod
    def from_document(
        cls,
        document: ArtNetworkDocument,
        *,
        mode: ArtMode | ArtModeLiteral = ArtMode.TRAINING,
    ) -> FuzzyArt:
        network = cls.from_settings(document.settings, mode=mode)
        if document.weights:
            network.weights = np.asarray(document.weights, dtype=np.float64)
        return network

    @override
    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(rho={self.rho}, categories={self.n_clusters}, "
            f"mode={self._mode})"
        )

    def _passed(self, coded: Vector, rho: float | None) -> NDArray[np.bool_]:
        vigilance = self.rho if rho is None else rho
        return self.match(coded) >= vigilance * coded.sum()

    def _check_input(self, coded: Any) -> Vector:
        sample = np.asarray(coded, dtype=np.float64)
        if sample.ndim != 1 or sample.size == 0 or sample.size % 2:
            error_msg = f"expected a complement-coded vector, got shape {sample.shape}"
            raise te.IcviDimensionError(error_msg)
        if self.n_clusters and sample.size != self.weights.shape[1]:
            error_msg = (
                f"input has dimension {sample.size}, "
                f"network has {self.weights.shape[1]}"
            )
            raise te.IcviDimensionError(error_msg)
        if not np.all((sample >= 0.0) & (sample <= 1.0)):
            raise te.IcviRangeError("coded input components must lie in [0, 1]")
        return sample


def _choose_rows(activation: Matrix, passed: NDArray[np.bool_]) -> NDArray[np.intp]:
    masked = np.where(passed, activation, -np.inf)
    return np.where(
        passed.any(axis=1), np.argmax(masked, axis=1), np.argmax(activation, axis=1)
    )
