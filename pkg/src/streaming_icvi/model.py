# pyright: reportMissingModuleSource=false
# pyright: reportMissingImports=false
from __future__ import annotations

import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from streaming_icvi import exception as te
from streaming_icvi.core.const import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_DB_P,
    DEFAULT_DB_Q,
    DEFAULT_EPSILON,
    DEFAULT_PBM_EXPONENT,
    DEFAULT_SEED,
    DEFAULT_SPIKE_WINDOW,
    NETWORK_DOCUMENT_VERSION,
    SWEEP_MIN_POINTS,
    SWEEP_RHO_A_MAXIMA,
)
from streaming_icvi.core.types import (
    ClustererKind,
    IndexKind,
    MembershipTest,
    Presentation,
    SigmaDataMode,
)

if sys.version_info >= (3, 11):  # pragma: no cover
    import tomllib as toml
else:  # pragma: no cover
    import tomli as toml

if TYPE_CHECKING:
    from os import PathLike

__all__ = [
    "ArtSettings",
    "BatchCviParams",
    "SweepSettings",
    "ExperimentConfig",
    "ArtNetworkDocument",
    "SmartNetworkDocument",
    "load_config",
]


class ArtSettings(BaseModel):
    """Hyperparameters of one fuzzy ART module."""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(ge=0.0, le=1.0)
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0.0)
    beta: float = Field(default=DEFAULT_BETA, gt=0.0, le=1.0)


class BatchCviParams(BaseModel):
    """Parameters of the from-scratch indices.

    With `use_squared_norms` set (the default) every index takes the form the
    incremental indices maintain; otherwise the textbook forms are used:
    Davies-Bouldin with `(db_p, db_q)`, the I index with Euclidean norms and
    the sample silhouette.
    """

    model_config = ConfigDict(frozen=True)

    db_p: float = Field(default=DEFAULT_DB_P, ge=1.0)
    db_q: float = Field(default=DEFAULT_DB_Q, gt=0.0)
    pbm_exponent: float = Field(default=DEFAULT_PBM_EXPONENT, ge=1.0)
    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0.0)
    use_squared_norms: bool = True
    membership: MembershipTest = MembershipTest.CONN


class SweepSettings(BaseModel):
    """Grid of A-side vigilance values for the connectivity comparison."""

    model_config = ConfigDict(frozen=True)

    rho_a_values: tuple[float, ...] | None = None
    points: int = Field(default=SWEEP_MIN_POINTS, ge=SWEEP_MIN_POINTS)
    maximum: float = Field(default=SWEEP_RHO_A_MAXIMA, ge=0.0, le=1.0)
    spike_window: int = Field(default=DEFAULT_SPIKE_WINDOW, ge=0)
    max_workers: int | None = Field(default=None, ge=1)

    def grid(self, rho: float) -> tuple[float, ...]:
        """A-side vigilance values, starting at the B-side vigilance `rho`."""
        if self.rho_a_values is not None:
            values = tuple(sorted(self.rho_a_values))
            if len(values) < SWEEP_MIN_POINTS:
                error_msg = f"a sweep needs at least {SWEEP_MIN_POINTS} grid points"
                raise te.IcviConfigError(error_msg)
            if values[0] < rho or values[-1] > 1.0:
                error_msg = f"sweep values must lie in [{rho}, 1]"
                raise te.IcviConfigError(error_msg)
            return values
        if self.maximum < rho:
            error_msg = f"sweep maximum {self.maximum} is below rho {rho}"
            raise te.IcviConfigError(error_msg)
        return tuple(float(x) for x in np.linspace(rho, self.maximum, self.points))


class ExperimentConfig(BaseModel):
    """One streaming experiment.

    Exactly one of `dataset` and `generator` names the data. The clusterer
    defaults to fuzzy SMART when the connectivity index is requested or an
    A-side vigilance is given, and to plain fuzzy ART otherwise.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    dataset: Path | None = None
    has_labels: bool = True
    generator: Literal["d4"] | None = None

    rho: float = Field(ge=0.0, le=1.0)
    rho_a: float | None = Field(default=None, ge=0.0, le=1.0)
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0.0)
    beta: float = Field(default=DEFAULT_BETA, gt=0.0, le=1.0)
    clusterer: ClustererKind = ClustererKind.AUTO

    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0.0)
    pbm_exponent: float = Field(default=DEFAULT_PBM_EXPONENT, ge=1.0)
    sigma_data: SigmaDataMode = SigmaDataMode.INCREMENTAL
    membership: MembershipTest = MembershipTest.CONN
    indices: tuple[IndexKind, ...] = tuple(IndexKind)

    presentation: Presentation = Presentation.CLUSTER_BY_CLUSTER
    cluster_order: tuple[int, ...] | None = None
    seed: int = DEFAULT_SEED

    records: Path | None = None
    summary: Path | None = None
    gnuplot: Path | None = None
    conn_matrix: Path | None = None
    network: Path | None = None

    sweep: SweepSettings = Field(default_factory=SweepSettings)

    @model_validator(mode="after")
    def _check(self) -> Self:
        if (self.dataset is None) == (self.generator is None):
            raise te.IcviConfigError("exactly one of dataset and generator is required")
        if len(set(self.indices)) != len(self.indices):
            raise te.IcviConfigError("indices must not repeat")
        smart = self.smart
        if IndexKind.CONN in self.indices and not smart:
            error_msg = "the connectivity index needs the fuzzy SMART clusterer"
            raise te.IcviConfigError(error_msg)
        if smart and self.rho_a is None:
            raise te.IcviConfigError("fuzzy SMART needs an A-side vigilance rho_a")
        if self.rho_a is not None and self.rho_a < self.rho:
            error_msg = f"rho_a ({self.rho_a}) must not be below rho ({self.rho})"
            raise te.IcviConfigError(error_msg)
        if self.cluster_order is not None and not self.has_labels:
            raise te.IcviConfigError("a cluster order needs labeled data")
        if (
            self.presentation is Presentation.CLUSTER_BY_CLUSTER
            and self.dataset is not None
            and not self.has_labels
        ):
            error_msg = "cluster-by-cluster presentation needs labeled data"
            raise te.IcviConfigError(error_msg)
        if self.gnuplot is not None and self.records is None:
            raise te.IcviConfigError("a gnuplot script needs a records file")
        if self.conn_matrix is not None and IndexKind.CONN not in self.indices:
            error_msg = "a CONN matrix export needs the connectivity index"
            raise te.IcviConfigError(error_msg)
        return self

    @property
    def smart(self) -> bool:
        """Whether the run uses fuzzy SMART."""
        if self.clusterer is ClustererKind.AUTO:
            return IndexKind.CONN in self.indices or self.rho_a is not None
        return self.clusterer is ClustererKind.SMART

    @property
    def art(self) -> ArtSettings:
        """Settings of the (B-side) clustering module."""
        return ArtSettings(rho=self.rho, alpha=self.alpha, beta=self.beta)

    @property
    def art_a(self) -> ArtSettings:
        """Settings of the prototype module of fuzzy SMART."""
        if self.rho_a is None:
            raise te.IcviConfigError("rho_a is not set")
        return ArtSettings(rho=self.rho_a, alpha=self.alpha, beta=self.beta)


class ArtNetworkDocument(BaseModel):
    """Serialized fuzzy ART module."""

    model_config = ConfigDict(frozen=True)

    version: int = NETWORK_DOCUMENT_VERSION
    kind: Literal["fuzzy-art"] = "fuzzy-art"
    settings: ArtSettings
    weights: list[list[float]]


class SmartNetworkDocument(BaseModel):
    """Serialized fuzzy SMART network."""

    model_config = ConfigDict(frozen=True)

    version: int = NETWORK_DOCUMENT_VERSION
    kind: Literal["smart"] = "smart"
    module_a: ArtNetworkDocument
    module_b: ArtNetworkDocument
    map_ab: list[int]
    cluster_samples: list[int]


def load_config(path: str | PathLike[str], **overrides: Any) -> ExperimentConfig:
    """Read an experiment configuration from a TOML file.

    Args:
        path: TOML file; relative data and output paths are resolved against
            its directory.
        **overrides: values replacing those of the file; `None` values are
            ignored.

    Returns:
        the validated configuration
    """
    file = Path(path)
    if not file.is_file():
        error_msg = f"config file not found: {file}"
        raise te.IcviFileNotFoundError(error_msg)
    with file.open("rb") as f:
        try:
            values: dict[str, Any] = toml.load(f)
        except toml.TOMLDecodeError as exc:
            error_msg = f"invalid config file {file}: {exc}"
            raise te.IcviConfigError(error_msg) from exc

    for key in ("dataset", "records", "summary", "gnuplot", "conn_matrix", "network"):
        if isinstance(value := values.get(key), str) and not Path(value).is_absolute():
            values[key] = file.parent / value
    values.update({key: value for key, value in overrides.items() if value is not None})
    return ExperimentConfig.model_validate(values)
