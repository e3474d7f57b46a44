"""Alignment + commitment loss with analytic gradients.

L = lambda_align * ((1 - cos(z_m, p_motion)) + (1 - cos(z_l, p_location)))
  + lambda_commit * (||z_m - p_sel_m||^2 + ||z_l - p_sel_l||^2)

p_motion / p_location are the labeled prototypes; p_sel is the current
argmax-similarity prototype.  Prototypes are text embeddings and treated as
constants: no gradient flows into the codebooks, and the argmax selection is
held fixed during differentiation.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnknownLabelError
from .codebook import Codebook
from .features import KinematicFeatures
from .projector import Projector


def _cos_and_grad(z: np.ndarray, p: np.ndarray) -> tuple[float, np.ndarray]:
    """cos(z, p) for unit p, with gradient w.r.t. unconstrained z."""
    zn = float(np.linalg.norm(z))
    if zn < 1e-12:
        # Flat spot; define cos = 0 with zero gradient to stay total.
        return 0.0, np.zeros_like(z)
    c = float(np.dot(z, p)) / zn
    grad = p / zn - (c / (zn * zn)) * z
    return c, grad


def _selected_prototype(z: np.ndarray, book: Codebook) -> np.ndarray:
    protos = book.matrix()
    zn = z / max(float(np.linalg.norm(z)), 1e-12)
    sims = protos @ zn
    return protos[int(np.argmax(sims))]


def temporal_loss(
    z_m: np.ndarray,
    z_l: np.ndarray,
    labels: tuple[str, str],
    motion_book: Codebook,
    location_book: Codebook,
    lambda_align: float = 1.0,
    lambda_commit: float = 0.1,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss plus analytic gradients w.r.t. the two embeddings."""
    motion_label, location_label = labels
    try:
        p_m = motion_book.prototypes[motion_book.index_of(motion_label)].embedding
        p_l = location_book.prototypes[
            location_book.index_of(location_label)
        ].embedding
    except UnknownLabelError:
        raise

    cos_m, dcos_m = _cos_and_grad(z_m, p_m)
    cos_l, dcos_l = _cos_and_grad(z_l, p_l)
    loss = lambda_align * ((1.0 - cos_m) + (1.0 - cos_l))
    grad_m = -lambda_align * dcos_m
    grad_l = -lambda_align * dcos_l

    if lambda_commit != 0.0:
        sel_m = _selected_prototype(z_m, motion_book)
        sel_l = _selected_prototype(z_l, location_book)
        dm = z_m - sel_m
        dl = z_l - sel_l
        loss += lambda_commit * (float(np.dot(dm, dm)) + float(np.dot(dl, dl)))
        grad_m = grad_m + 2.0 * lambda_commit * dm
        grad_l = grad_l + 2.0 * lambda_commit * dl

    return loss, grad_m, grad_l


def chain_through_embedding(
    grad_z: np.ndarray, features: np.ndarray, proj: Projector
) -> tuple[np.ndarray, np.ndarray]:
    """Backpropagate an embedding gradient through z = normalize(Wf + b)."""
    u = proj.weights @ features + proj.bias
    n = float(np.linalg.norm(u))
    z = u / n
    grad_u = (grad_z - z * float(np.dot(z, grad_z))) / n
    return np.outer(grad_u, features), grad_u


def temporal_loss_wrt_projector(
    feat: KinematicFeatures | np.ndarray,
    proj_motion: Projector,
    proj_location: Projector,
    labels: tuple[str, str],
    motion_book: Codebook,
    location_book: Codebook,
    lambda_align: float = 1.0,
    lambda_commit: float = 0.1,
) -> tuple[float, tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Loss and gradients w.r.t. both projectors' weights and biases."""
    f = feat.as_vector() if isinstance(feat, KinematicFeatures) else np.asarray(feat)
    grads = []
    zs = []
    for proj in (proj_motion, proj_location):
        u = proj.weights @ f + proj.bias
        n = float(np.linalg.norm(u))
        if n < 1e-12:
            raise ZeroDivisionError("degenerate embedding during training")
        zs.append(u / n)
    loss, grad_m, grad_l = temporal_loss(
        zs[0], zs[1], labels, motion_book, location_book, lambda_align, lambda_commit
    )
    for grad_z, proj in ((grad_m, proj_motion), (grad_l, proj_location)):
        grads.append(chain_through_embedding(grad_z, f, proj))
    return loss, grads[0], grads[1]
