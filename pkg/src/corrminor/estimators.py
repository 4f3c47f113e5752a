"""scikit-learn style wrappers around the CMN machinery.

Samples are density matrices: either a sequence of :class:`DensityMatrix`
objects or an array of shape ``(n_samples, N, N)`` together with ``dims``.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cmn_detect import INFINITY, CmnParams, cmn_from_singulars, detect, format_p, singulars
from .states import DensityMatrix


def check_density_batch(X, dims=None):
    """Validate a batch of states and return a list of DensityMatrix.

    Parameters
    ----------
    X : sequence of DensityMatrix or array_like, shape (n_samples, N, N)
    dims : tuple of int, optional
        ``(dim_a, dim_b)``; required for raw arrays, checked against
        DensityMatrix inputs when given.
    """
    if isinstance(X, DensityMatrix):
        X = [X]
    if len(X) and all(isinstance(x, DensityMatrix) for x in X):
        out = list(X)
    else:
        arr = np.asarray(X, dtype=complex)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected an array of shape (n_samples, N, N), got {arr.shape}")
        if dims is None:
            raise ValueError("dims=(dim_a, dim_b) is required for array input")
        out = [DensityMatrix(dims[0], dims[1], m) for m in arr]
    if not out:
        raise ValueError("empty batch")
    ref = tuple(dims) if dims is not None else out[0].dims
    bad = [i for i, s in enumerate(out) if s.dims != ref]
    if bad:
        raise ValueError(f"samples {bad[:5]} have dims different from {ref}")
    return out


class CorrelationMinorNorms(TransformerMixin, BaseEstimator):
    """Map each state to a feature vector of CMN values.

    Parameters
    ----------
    h_list : sequence of int, optional
        Minor orders; default ``1, ..., d**2`` of the fitted dims.
    p_list : sequence, default (1, 2, 'inf')
        Schatten orders; ``'inf'`` selects the operator norm.
    dims : tuple of int, optional
        Required when transforming raw arrays.
    """

    def __init__(self, h_list=None, p_list=(1, 2, "inf"), dims=None):
        self.h_list = h_list
        self.p_list = p_list
        self.dims = dims

    def fit(self, X, y=None):
        states = check_density_batch(X, self.dims)
        self.dims_ = states[0].dims
        d2 = min(self.dims_) ** 2
        hs = list(self.h_list) if self.h_list is not None else list(range(1, d2 + 1))
        self.params_ = [CmnParams(h, p).validate(d2) for h in hs for p in self.p_list]
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        states = check_density_batch(X, self.dims_)
        out = np.empty((len(states), len(self.params_)))
        for i, rho in enumerate(states):
            sigma = singulars(rho)
            out[i] = [cmn_from_singulars(sigma, pr) for pr in self.params_]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "params_")
        return np.array([f"M_{pr.h}_{format_p(pr.p)}" for pr in self.params_], dtype=object)


class CMNEntanglementDetector(ClassifierMixin, BaseEstimator):
    """Label a state entangled when any CMN separable bound is exceeded.

    ``fit`` learns nothing beyond the label set; the bounds are closed form.
    ``decision_function`` returns the largest ``value - bound`` over the
    applicable criteria, so positive scores mean detected entanglement.
    """

    def __init__(self, h_list=None, p_list=(1, "inf"), dims=None, tol=1e-9):
        self.h_list = h_list
        self.p_list = p_list
        self.dims = dims
        self.tol = tol

    def fit(self, X, y=None):
        states = check_density_batch(X, self.dims)
        self.dims_ = states[0].dims
        self.classes_ = np.array([False, True])
        return self

    def _verdicts(self, X):
        check_is_fitted(self, "classes_")
        p_list = [INFINITY if str(p).lower() == "inf" else p for p in self.p_list]
        return [detect(rho, self.h_list, p_list, self.tol) for rho in check_density_batch(X, self.dims_)]

    def predict(self, X):
        return np.array([v.entangled for v in self._verdicts(X)])

    def decision_function(self, X):
        scores = []
        for v in self._verdicts(X):
            margins = [c.value - c.bound for c in v.criteria if c.applicable]
            scores.append(max(margins) if margins else -np.inf)
        return np.array(scores)
