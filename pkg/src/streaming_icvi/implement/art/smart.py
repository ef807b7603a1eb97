from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np
from typing_extensions import override

from streaming_icvi import exception as te
from streaming_icvi.core.const import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    MATCH_TRACKING_EPSILON,
)
from streaming_icvi.core.types import ArtMode, SmartAssignment
from streaming_icvi.implement.art.fuzzy import FuzzyArt, complement_code
from streaming_icvi.interface.clusterer import ClustererProtocol
from streaming_icvi.log import get_logger
from streaming_icvi.model import SmartNetworkDocument

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from streaming_icvi.core.types import ArtModeLiteral, Vector
    from streaming_icvi.model import ArtSettings

__all__ = ["FuzzySmart"]

logger = get_logger()


class FuzzySmart(ClustererProtocol):
    """Two-level fuzzy ART hierarchy.

    Module B (vigilance `rho`) forms the clusters and module A (vigilance
    `rho_a`) the prototypes; `map_ab` sends every prototype to its cluster.
    Each sample is presented to module B first. Module A then searches for a
    prototype of that cluster, raising its vigilance past any prototype
    mapped elsewhere and creating a prototype when the search runs out. The
    first two samples of every cluster always create prototypes, so every
    cluster with two or more samples has two or more prototypes.

    Args:
        rho: B-side vigilance.
        rho_a: A-side vigilance, not below `rho`.
        alpha: choice parameter of both modules.
        beta: learning rate of both modules.
        mode: training or evaluation.
    """

    def __init__(
        self,
        rho: float,
        rho_a: float,
        *,
        alpha: float = DEFAULT_ALPHA,
        beta: float = DEFAULT_BETA,
        mode: ArtMode | ArtModeLiteral = ArtMode.TRAINING,
    ) -> None:
        if rho_a < rho:
            error_msg = f"rho_a ({rho_a}) must not be below rho ({rho})"
            raise te.IcviConfigError(error_msg)
        self.module_a = FuzzyArt(rho_a, alpha=alpha, beta=beta, mode=mode)
        self.module_b = FuzzyArt(rho, alpha=alpha, beta=beta, mode=mode)
        self.map_ab: list[int] = []
        self.cluster_samples: list[int] = []

    @classmethod
    def from_settings(
        cls,
        settings: ArtSettings,
        settings_a: ArtSettings,
        *,
        mode: ArtMode | ArtModeLiteral = ArtMode.TRAINING,
    ) -> FuzzySmart:
        return cls(
            settings.rho,
            settings_a.rho,
            alpha=settings.alpha,
            beta=settings.beta,
            mode=mode,
        )

    @property
    @override
    def mode(self) -> ArtMode:
        return self.module_b.mode

    @mode.setter
    def mode(self, value: ArtMode | ArtModeLiteral) -> None:
        self.module_a.mode = value
        self.module_b.mode = value

    @property
    @override
    def n_clusters(self) -> int:
        return self.module_b.n_clusters

    @property
    def n_prototypes(self) -> int:
        return self.module_a.n_clusters

    def present(self, x: Any) -> SmartAssignment:
        """Present one sample.

        Args:
            x: normalized sample with components in [0, 1].

        Returns:
            winning prototype, its cluster, the second-best prototype and
            whether the prototype or the cluster was created
        """
        coded = complement_code(x)
        if self.mode is ArtMode.EVALUATION:
            prototype = self.module_a.predict(coded)
            if prototype is None:  # pragma: no cover
                raise te.IcviStateError("cannot evaluate an empty network")
            second = self.module_a.predict(coded, exclude=prototype)
            return SmartAssignment(
                prototype, self.map_ab[prototype], second, False, False
            )

        cluster, cluster_created = self.module_b.present(coded)
        if cluster_created:
            self.cluster_samples.append(0)
        self.cluster_samples[cluster] += 1

        if self.cluster_samples[cluster] <= 2:  # noqa: PLR2004
            prototype, prototype_created = self._add_prototype(coded, cluster), True
        else:
            prototype, prototype_created = self._resonate(coded, cluster)
        second = self.module_a.predict(coded, exclude=prototype)
        return SmartAssignment(
            prototype, cluster, second, prototype_created, cluster_created
        )

    def winners_batch(self, x: Any) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        """Evaluation-mode first and second prototypes of many samples.

        Args:
            x: normalized samples, one per row.

        Returns:
            first and second prototypes; the second is `-1` while a single
            prototype exists
        """
        return self.module_a.winners_batch(complement_code(np.atleast_2d(x)))

    def cluster_of(self, prototypes: Any) -> NDArray[np.intp]:
        """Clusters of the given prototypes."""
        return np.asarray(self.map_ab, dtype=np.intp)[np.asarray(prototypes)]

    @override
    def label(self, x: Any) -> int:
        return self.present(x).cluster

    @override
    def model_dump(self) -> dict[str, Any]:
        return self.document().model_dump(mode="json")

    def document(self) -> SmartNetworkDocument:
        return SmartNetworkDocument(
            module_a=self.module_a.document(),
            module_b=self.module_b.document(),
            map_ab=list(self.map_ab),
            cluster_samples=list(self.cluster_samples),
        )

    @classmethod
    def from_document(
        cls,
        document: SmartNetworkDocument,
        *,
        mode: ArtMode | ArtModeLiteral = ArtMode.TRAINING,
    ) -> FuzzySmart:
        network = cls.from_settings(
            document.module_b.settings, document.module_a.settings, mode=mode
        )
        network.module_a = FuzzyArt.from_document(document.module_a, mode=mode)
        network.module_b = FuzzyArt.from_document(document.module_b, mode=mode)
        network.map_ab = list(document.map_ab)
        network.cluster_samples = list(document.cluster_samples)
        return network

    @override
    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(rho={self.module_b.rho}, "
            f"rho_a={self.module_a.rho}, clusters={self.n_clusters}, "
            f"prototypes={self.n_prototypes})"
        )

    def _add_prototype(self, coded: Vector, cluster: int) -> int:
        prototype = self.module_a.add_category(coded)
        self.map_ab.append(cluster)
        return prototype

    def _resonate(self, coded: Vector, cluster: int) -> tuple[int, bool]:
        norm = float(coded.sum())
        rho = self.module_a.rho
        match = self.module_a.match(coded)
        for category in self.module_a.ranking(coded):
            if match[category] < rho * norm:
                continue
            if self.map_ab[category] == cluster:
                self.module_a.learn(int(category), coded)
                return int(category), False
            rho = float(match[category]) / norm + MATCH_TRACKING_EPSILON
            logger.debug(
                "prototype %d maps to cluster %d, not %d; vigilance raised to %.6f",
                category,
                self.map_ab[category],
                cluster,
                rho,
            )
        return self._add_prototype(coded, cluster), True
