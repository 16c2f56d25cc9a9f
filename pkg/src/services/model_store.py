"""Model documents: conversion between fitted models and their JSON form."""

import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from src.lib.artifacts import read_json
from src.lib.config import RNG_ALGORITHM, SCHEMA_VERSION
from src.lib.csv_models import KineticModelDocument, StaticModelDocument
from src.lib.errors import ArtifactError, MarketIsingError
from src.models.kinetic_ising import (
    HatBasis,
    KineticFitConfig,
    KineticIsingModel,
    StockFitTrace,
)
from src.models.static_ising import StaticFitConfig, StaticFitTrace, StaticIsingModel

logger = logging.getLogger(__name__)


def static_fit_meta(cfg: StaticFitConfig, trace: StaticFitTrace) -> dict[str, Any]:
    """Settings and outcome recorded next to the static parameters."""
    return {
        "mode": "exact" if cfg.exact else "gibbs",
        "converged": trace.converged,
        "iterations": trace.iterations,
        "final_max_abs_residual": trace.final_max_abs_residual,
        "final_rms_residual": trace.final_rms_residual,
        "smoothed_residual": trace.smoothed_residual,
        "max_iterations": cfg.max_iterations,
        "step_size": cfg.step_size,
        "step_schedule": cfg.step_schedule,
        "tolerance": cfg.tolerance,
        "init": cfg.init,
        "gibbs": {
            "n_chains": cfg.gibbs.n_chains,
            "burn_in_sweeps": cfg.gibbs.burn_in_sweeps,
            "sweeps_per_sample": cfg.gibbs.sweeps_per_sample,
            "n_samples": cfg.gibbs.n_samples,
            "scan": cfg.gibbs.scan,
        },
        "seed": cfg.gibbs.seed,
        "rng": RNG_ALGORITHM,
    }


def kinetic_fit_meta(
    cfg: KineticFitConfig, traces: list[StockFitTrace], seed: int
) -> dict[str, Any]:
    return {
        "direction": cfg.direction,
        "max_iterations": cfg.max_iterations,
        "tolerance": cfg.tolerance,
        "step_size": cfg.step_size,
        "converged_stocks": sum(1 for t in traces if t.converged),
        "n_stocks": len(traces),
        "max_gradient": max((t.gradient_max_abs for t in traces), default=0.0),
        "seed": seed,
        "rng": RNG_ALGORITHM,
    }


def static_model_payload(model: StaticIsingModel, fit_meta: dict[str, Any]) -> dict[str, Any]:
    document = StaticModelDocument(
        schema_version=SCHEMA_VERSION,
        n=model.n,
        tickers=list(model.tickers),
        h=model.h.tolist(),
        j=model.upper_triangle().tolist(),
        fit_meta=fit_meta,
    )
    return document.model_dump()


def kinetic_model_payload(
    model: KineticIsingModel, penalties: dict[str, float], fit_meta: dict[str, Any]
) -> dict[str, Any]:
    document = KineticModelDocument(
        schema_version=SCHEMA_VERSION,
        n=model.n,
        m_basis=model.basis.n_basis,
        t_len=model.basis.t_len,
        tickers=list(model.tickers),
        gamma=model.gamma.ravel().tolist(),
        a=model.a.tolist(),
        j=model.J.ravel().tolist(),
        penalties=penalties,
        fit_meta=fit_meta,
    )
    return document.model_dump()


def _validated(document_type: type, path: Path) -> Any:
    payload = read_json(path)
    try:
        return document_type.model_validate(payload)
    except PydanticValidationError as e:
        raise ArtifactError(f"Invalid model document {path}: {e.errors()[0]['msg']}") from e


def load_static_model(path: Path | str) -> tuple[StaticIsingModel, dict[str, Any]]:
    """
    Read a static model document.

    Raises:
        ArtifactError: Missing, unreadable or malformed document
    """
    path = Path(path)
    doc: StaticModelDocument = _validated(StaticModelDocument, path)
    try:
        model = StaticIsingModel.from_upper(np.array(doc.h), np.array(doc.j), tuple(doc.tickers))
    except MarketIsingError as e:
        raise ArtifactError(f"Invalid static model in {path}: {e.message}") from e
    logger.debug(f"Loaded static model N={model.n} from {path}")
    return model, doc.fit_meta


def load_kinetic_model(
    path: Path | str,
) -> tuple[KineticIsingModel, dict[str, float], dict[str, Any]]:
    """
    Read a kinetic model document.

    Returns:
        (model, penalties, fit_meta)

    Raises:
        ArtifactError: Missing, unreadable or malformed document
    """
    path = Path(path)
    doc: KineticModelDocument = _validated(KineticModelDocument, path)
    try:
        basis = HatBasis(doc.m_basis, doc.t_len)
        model = KineticIsingModel(
            gamma=np.array(doc.gamma).reshape(doc.n, doc.m_basis),
            a=np.array(doc.a),
            J=np.array(doc.j).reshape(doc.n, doc.n),
            basis=basis,
            tickers=tuple(doc.tickers),
        )
    except MarketIsingError as e:
        raise ArtifactError(f"Invalid kinetic model in {path}: {e.message}") from e
    logger.debug(f"Loaded kinetic model N={model.n}, M={doc.m_basis} from {path}")
    return model, doc.penalties, doc.fit_meta
