"""Seasonal ARIMA modelling with exact Gaussian likelihood.

The model for a series ``y_t`` with optional regressors ``x_t`` is::

    (1 - B)^d (1 - B^s)^D y_t = c + x_t' beta + u_t

where ``u_t`` is a multiplicative seasonal ARMA(p, q)(P, Q, s) process.
Estimation runs a Kalman filter over the ARMA state-space form with the
innovation variance concentrated out of the likelihood, and a
derivative-free simplex search over partial-autocorrelation-transformed
coefficients, so every parameter vector visited by the optimizer maps to a
stationary and invertible model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_discrete_lyapunov
from scipy.optimize import minimize

from .errors import FitFailureError, InsufficientDataError, ParameterError

LOG2PI = math.log(2.0 * math.pi)

# Kalman recursions switch to the steady-state gain once the predicted state
# covariance stops changing at this relative tolerance.
STEADY_STATE_TOL = 1e-12

# Relative floor applied to the concentrated variance estimate so that a
# model reproducing the data exactly still has a finite likelihood.
SIGMA2_FLOOR = 1e-10

FIT_MAXITER = 500
FIT_FATOL = 1e-6
RESTART_OFFSETS = (0.0, 0.2, -0.2)

_PENALTY = 1e10

# Pipeline default: weekly seasonality on first-differenced counts.
DEFAULT_ORDER = (2, 1, 2)
DEFAULT_SEASONAL_ORDER = (1, 0, 1, 7)


@dataclass(frozen=True)
class SarimaxSpec:
    """Model order ``(p, d, q)`` with seasonal order ``(P, D, Q, s)``.

    ``trend`` is ``"c"`` for a constant in the differenced equation or
    ``"n"`` for none.
    """

    order: tuple[int, int, int]
    seasonal_order: tuple[int, int, int, int] = (0, 0, 0, 1)
    trend: str = "c"
    n_exog: int = 0

    def __post_init__(self):
        if len(self.order) != 3 or len(self.seasonal_order) != 4:
            raise ParameterError("order must be (p, d, q) and seasonal (P, D, Q, s)")
        if any(v < 0 for v in self.order) or any(v < 0 for v in self.seasonal_order):
            raise ParameterError("model orders must be non-negative")
        P, D, Q, s = self.seasonal_order
        if s < 1:
            raise ParameterError("seasonal period must be >= 1")
        if s == 1 and (P or D or Q):
            raise ParameterError("seasonal terms need a period of at least 2")
        if self.trend not in ("n", "c"):
            raise ParameterError(f"trend must be 'n' or 'c', got {self.trend!r}")
        if self.n_exog < 0:
            raise ParameterError("n_exog must be non-negative")

    @property
    def p(self) -> int:
        return self.order[0]

    @property
    def d(self) -> int:
        return self.order[1]

    @property
    def q(self) -> int:
        return self.order[2]

    @property
    def seasonal_p(self) -> int:
        return self.seasonal_order[0]

    @property
    def seasonal_d(self) -> int:
        return self.seasonal_order[1]

    @property
    def seasonal_q(self) -> int:
        return self.seasonal_order[2]

    @property
    def period(self) -> int:
        return self.seasonal_order[3]

    # Conventional one-letter aliases for the seasonal orders.
    P = seasonal_p
    D = seasonal_d
    Q = seasonal_q
    s = period

    @property
    def n_structure(self) -> int:
        """Number of AR/MA coefficients, seasonal included."""
        return self.p + self.q + self.seasonal_p + self.seasonal_q

    @property
    def k_trend(self) -> int:
        return 1 if self.trend == "c" else 0


@dataclass(frozen=True)
class SarimaxParams:
    """Constrained coefficient values; all polynomials use the sign
    convention ``(1 - sum ar_i B^i)`` and ``(1 + sum ma_i B^i)``."""

    ar: np.ndarray
    ma: np.ndarray
    seasonal_ar: np.ndarray
    seasonal_ma: np.ndarray
    trend_const: float = 0.0
    beta: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass(frozen=True)
class StateSpace:
    """State-space matrices of the ARMA part: transition T (m, m), selection
    R (m,), design Z (m,). The observed value is ``Z @ state``."""

    transition: np.ndarray
    selection: np.ndarray
    design: np.ndarray

    @property
    def m(self) -> int:
        return self.transition.shape[0]


@dataclass(frozen=True)
class KalmanResult:
    """Filter output: innovations and their variances are in data units;
    predicted_state/predicted_cov describe the state one step past the
    sample."""

    loglik: float
    sigma2: float
    innovations: np.ndarray
    innovation_variances: np.ndarray
    predicted_state: np.ndarray
    predicted_cov: np.ndarray


@dataclass(frozen=True)
class SarimaxFit:
    """Everything needed to forecast from a fitted model."""

    spec: SarimaxSpec
    params: SarimaxParams
    sigma2: float
    loglik: float
    aic: float
    state: StateSpace
    kalman: KalmanResult
    endog: np.ndarray
    exog: np.ndarray | None
    w: np.ndarray
    prefixes: list[np.ndarray]

    @property
    def n_obs(self) -> int:
        return len(self.endog)

    @property
    def ar(self) -> np.ndarray:
        return self.params.ar

    @property
    def ma(self) -> np.ndarray:
        return self.params.ma

    @property
    def seasonal_ar(self) -> np.ndarray:
        return self.params.seasonal_ar

    @property
    def seasonal_ma(self) -> np.ndarray:
        return self.params.seasonal_ma

    @property
    def exog_beta(self) -> np.ndarray:
        return self.params.beta

    @property
    def trend_const(self) -> float:
        return self.params.trend_const

    @property
    def log_likelihood(self) -> float:
        return self.loglik


def difference(y, d: int = 0, D: int = 0, s: int = 1):
    """Apply seasonal differencing D times, then ordinary differencing d
    times, recording the prefix consumed at each stage.

    Returns (w, prefixes); ``undifference(w, prefixes, d, D, s)`` recovers
    the input exactly.
    """
    w = np.asarray(y, dtype=np.float64)
    if w.ndim != 1:
        raise ParameterError("difference expects a 1-d series")
    prefixes: list[np.ndarray] = []
    for _ in range(D):
        if len(w) <= s:
            raise InsufficientDataError(
                f"series of length {len(w)} cannot be seasonally differenced (s={s})"
            )
        prefixes.append(w[:s].copy())
        w = w[s:] - w[:-s]
    for _ in range(d):
        if len(w) <= 1:
            raise InsufficientDataError(
                f"series of length {len(w)} cannot be differenced"
            )
        prefixes.append(w[:1].copy())
        w = np.diff(w)
    return w, prefixes


def undifference(w, prefixes: list[np.ndarray], d: int = 0, D: int = 0, s: int = 1):
    """Invert :func:`difference`, consuming the stored prefixes in reverse."""
    x = np.asarray(w, dtype=np.float64)
    stack = list(prefixes)
    if len(stack) != d + D:
        raise ParameterError(f"expected {d + D} prefixes, got {len(stack)}")
    for _ in range(d):
        pre = stack.pop()
        x = np.concatenate([pre, pre[-1] + np.cumsum(x)])
    for _ in range(D):
        pre = stack.pop()
        out = np.empty(len(x) + s)
        out[:s] = pre
        for j in range(s):
            out[j::s] = pre[j] + np.concatenate([[0.0], np.cumsum(x[j::s])])
        x = out
    return x


def integration_poly(d: int, D: int, s: int = 1) -> np.ndarray:
    """Coefficients of ``(1 - B)^d (1 - B^s)^D`` in increasing powers of B."""
    poly = np.array([1.0])
    one_minus_b = np.array([1.0, -1.0])
    one_minus_bs = np.zeros(s + 1)
    one_minus_bs[0] = 1.0
    one_minus_bs[-1] = -1.0
    for _ in range(d):
        poly = np.convolve(poly, one_minus_b)
    for _ in range(D):
        poly = np.convolve(poly, one_minus_bs)
    return poly


def _reduced_coeffs(short, long_, s: int, sign: float) -> np.ndarray:
    """Lag coefficients (beyond lag 0) of the product of a non-seasonal and a
    seasonal lag polynomial, in the convention selected by ``sign``."""
    a = np.ones(1) if len(short) == 0 else np.concatenate([[1.0], sign * np.asarray(short, float)])
    b = np.zeros(s * len(long_) + 1)
    b[0] = 1.0
    for j, val in enumerate(np.asarray(long_, float)):
        b[s * (j + 1)] = sign * val
    prod = np.convolve(a, b)
    return sign * prod[1:]


def build_state_space(spec: SarimaxSpec, params: SarimaxParams) -> StateSpace:
    """State-space form of the (multiplied) ARMA part of the model.

    The state dimension is ``m = max(p + s P, q + s Q + 1)``; the reduced AR
    coefficients fill the first column of the transition matrix, which has
    ones on the superdiagonal, and the selection vector is 1 followed by the
    reduced MA coefficients.
    """
    ar = _reduced_coeffs(params.ar, params.seasonal_ar, spec.period, -1.0)
    ma = _reduced_coeffs(params.ma, params.seasonal_ma, spec.period, 1.0)
    m = max(spec.p + spec.period * spec.seasonal_p,
            spec.q + spec.period * spec.seasonal_q + 1)
    T = np.zeros((m, m))
    T[: len(ar), 0] = ar
    for i in range(m - 1):
        T[i, i + 1] = 1.0
    R = np.zeros(m)
    R[0] = 1.0
    R[1 : 1 + len(ma)] = ma
    Z = np.zeros(m)
    Z[0] = 1.0
    return StateSpace(transition=T, selection=R, design=Z)


def _stationary_start(T: np.ndarray, RRt: np.ndarray) -> np.ndarray:
    """Stationary state covariance: the fixed point P = T P T' + R R'.

    Solved directly via the Kronecker linear system, which is several times
    faster than scipy's bilinear-transform solver at these sizes; falls back
    to scipy when the direct solve is unusable (roots too close to the unit
    circle).
    """
    m = T.shape[0]
    P = None
    try:
        vec = np.linalg.solve(np.eye(m * m) - np.kron(T, T), RRt.ravel())
        cand = vec.reshape(m, m)
        resid = np.abs(cand - T @ cand @ T.T - RRt).max()
        if np.isfinite(resid) and resid <= 1e-8 * (1.0 + np.abs(RRt).max()):
            P = cand
    except np.linalg.LinAlgError:
        P = None
    if P is None:
        try:
            P = solve_discrete_lyapunov(T, RRt)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise FitFailureError(
                f"stationary covariance solve failed: {exc}") from None
    if not np.all(np.isfinite(P)):
        raise FitFailureError("stationary covariance is not finite")
    return (P + P.T) / 2.0


def _run_filter(ystar: np.ndarray, T: np.ndarray, R: np.ndarray):
    """Kalman recursions at unit innovation variance.

    Returns (v, f, a_next, P_next) where v are innovations, f their
    variances, and a_next/P_next the one-step-ahead state prediction after
    the sample. Switches to the steady-state gain once the covariance
    recursion converges.

    The inner loop is the bottleneck of every fit, so it works on
    preallocated buffers; :func:`_run_filter_naive` is the plain-formula
    twin the tests compare against.
    """
    m = T.shape[0]
    RRt = np.outer(R, R)
    P = _stationary_start(T, RRt)
    n = len(ystar)
    v = np.empty(n)
    f = np.empty(n)
    a = np.zeros(m)
    ft = P[0, 0]
    if ft <= 0:
        raise FitFailureError("non-positive innovation variance at start")
    Tt = np.ascontiguousarray(T.T)
    TP = T @ P
    K = TP[:, 0] / ft
    Pn = np.empty((m, m))
    KK = np.empty((m, m))
    anew = np.empty(m)
    Tm = None
    frozen = False
    freeze_at = 0
    # Convergence is probed on a stride; between probes the exact recursion
    # runs anyway, so a late freeze only makes the result more exact.
    check_stride = 8
    P_probe = P.copy()
    for t in range(n):
        if frozen:
            break
        vt = ystar[t] - a[0]
        v[t] = vt
        f[t] = ft
        np.matmul(T, a, out=anew)
        anew += K * vt
        a, anew = anew, a
        # P' = T P T' + R R' - f K K', with f K K' = u u' for u = (T P) e1 / sqrt(f)
        np.matmul(TP, Tt, out=Pn)
        Pn += RRt
        u = TP[:, 0] / math.sqrt(ft)
        np.multiply(u[:, None], u, out=KK)
        Pn -= KK
        freeze_now = False
        if t % check_stride == check_stride - 1:
            np.add(Pn, Pn.T.copy(), out=Pn)
            Pn /= 2.0
            freeze_now = (abs(Pn - P_probe).max()
                          <= STEADY_STATE_TOL * (1.0 + abs(P_probe).max()))
            P_probe = Pn.copy()
        P, Pn = Pn, P
        ft = P[0, 0]
        if ft <= 0:
            raise FitFailureError(f"non-positive innovation variance at step {t + 1}")
        np.matmul(T, P, out=TP)
        K = TP[:, 0] / ft
        if freeze_now:
            frozen = True
            freeze_at = t + 1
            Tm = T.copy()
            Tm[:, 0] -= K
    if frozen and freeze_at < n:
        Kys = K[None, :] * ystar[freeze_at:, None]
        for i, t in enumerate(range(freeze_at, n)):
            v[t] = ystar[t] - a[0]
            f[t] = ft
            np.matmul(Tm, a, out=anew)
            anew += Kys[i]
            a, anew = anew, a
    return v, f, a.copy(), P.copy()


def _run_filter_naive(ystar: np.ndarray, T: np.ndarray, R: np.ndarray):
    """Textbook form of the same recursion, for cross-checking."""
    m = T.shape[0]
    RRt = np.outer(R, R)
    P = _stationary_start(T, RRt)
    n = len(ystar)
    v = np.empty(n)
    f = np.empty(n)
    a = np.zeros(m)
    for t in range(n):
        ft = P[0, 0]
        if ft <= 0:
            raise FitFailureError(f"non-positive innovation variance at step {t}")
        K = T @ P[:, 0] / ft
        vt = ystar[t] - a[0]
        v[t] = vt
        f[t] = ft
        a = T @ a + K * vt
        P = T @ P @ T.T + RRt - ft * np.outer(K, K)
    return v, f, a, P


def kalman_loglik(y, state: StateSpace, sigma2: float | None = None) -> KalmanResult:
    """Gaussian log-likelihood of a zero-mean series under the ARMA state
    space, by prediction-error decomposition.

    Parameters
    ----------
    y : array_like
        Observed series, already demeaned (the filter assumes the
        observation is ``Z @ state`` with no intercept).
    state : StateSpace
        Matrices from :func:`build_state_space`; the AR part must be
        stationary so the filter can start from the stationary covariance.
    sigma2 : float, optional
        Innovation variance. When omitted it is concentrated out: the
        maximizing value ``mean(v_t^2 / f_t)`` is used, floored at a small
        multiple of the mean square of ``y`` so exact fits stay finite.

    Returns
    -------
    KalmanResult
        Innovations, their variances, the log-likelihood, and the one-step
        state prediction past the end of the sample.
    """
    ystar = np.asarray(y, dtype=np.float64)
    if ystar.ndim != 1 or len(ystar) == 0:
        raise ParameterError("kalman_loglik expects a non-empty 1-d series")
    v, f, a_next, P_next = _run_filter(ystar, state.transition, state.selection)
    n = len(ystar)
    ssq = float(np.sum(v * v / f))
    logdet = float(np.sum(np.log(f)))
    if sigma2 is None:
        floor = SIGMA2_FLOOR * max(1.0, float(np.mean(ystar * ystar)))
        sigma2 = max(ssq / n, floor)
    elif sigma2 <= 0:
        raise ParameterError("sigma2 must be positive")
    loglik = -0.5 * n * (LOG2PI + math.log(sigma2)) - 0.5 * logdet - 0.5 * ssq / sigma2
    return KalmanResult(
        loglik=float(loglik),
        sigma2=float(sigma2),
        innovations=v,
        innovation_variances=sigma2 * f,
        predicted_state=a_next,
        predicted_cov=sigma2 * P_next,
    )


def constrain_stationary(x) -> np.ndarray:
    """Map an unconstrained vector to AR coefficients of a stationary
    polynomial via partial autocorrelations and the Durbin-Levinson
    recursion."""
    x = np.asarray(x, dtype=np.float64)
    r = x / np.sqrt(1.0 + x * x)
    y = r.copy()
    for k in range(1, len(r)):
        y[:k] = y[:k] - r[k] * y[:k][::-1]
    return y


def unconstrain_stationary(phi) -> np.ndarray:
    """Inverse of :func:`constrain_stationary`; requires a strictly
    stationary input."""
    y = np.asarray(phi, dtype=np.float64).copy()
    n = len(y)
    r = np.zeros(n)
    for k in range(n - 1, 0, -1):
        r[k] = y[k]
        denom = 1.0 - r[k] * r[k]
        if denom <= 0:
            raise ParameterError("coefficients are not strictly stationary")
        y[:k] = (y[:k] + r[k] * y[:k][::-1]) / denom
    if n:
        r[0] = y[0]
    if np.any(np.abs(r) >= 1.0):
        raise ParameterError("coefficients are not strictly stationary")
    return r / np.sqrt(1.0 - r * r)


def _unpack(u: np.ndarray, spec: SarimaxSpec, n_exog: int,
            mean_w: float, scale_w: float) -> SarimaxParams:
    """Map an unconstrained optimizer vector to constrained parameters.

    The trend entry is centered and scaled so the all-zeros vector describes
    white noise around the sample mean of the differenced series.
    """
    i = 0
    trend_const = 0.0
    if spec.k_trend:
        trend_const = mean_w + u[i] * scale_w
        i += 1
    ar = constrain_stationary(u[i : i + spec.p]); i += spec.p
    ma = -constrain_stationary(u[i : i + spec.q]); i += spec.q
    sar = constrain_stationary(u[i : i + spec.seasonal_p]); i += spec.seasonal_p
    sma = -constrain_stationary(u[i : i + spec.seasonal_q]); i += spec.seasonal_q
    beta = u[i : i + n_exog].copy()
    return SarimaxParams(ar=ar, ma=ma, seasonal_ar=sar, seasonal_ma=sma,
                         trend_const=trend_const, beta=beta)


def _deterministic(params: SarimaxParams, wx: np.ndarray | None, n: int) -> np.ndarray:
    mean = np.full(n, params.trend_const)
    if wx is not None and len(params.beta):
        mean = mean + wx @ params.beta
    return mean


def fit(y, spec: SarimaxSpec, exog=None) -> SarimaxFit:
    """Estimate a seasonal ARIMA model by maximum likelihood.

    The differenced series must have at least ``5 * (p + q + P + Q)``
    observations. The likelihood is concentrated over the innovation
    variance and maximized with Nelder-Mead restarted from three
    deterministic points; the best final value wins, earlier starts winning
    ties.

    Returns a :class:`SarimaxFit`; raises FitFailureError if no visited
    parameter vector has a finite likelihood.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise ParameterError("fit expects a 1-d series")
    if exog is not None:
        exog = np.asarray(exog, dtype=np.float64)
        if exog.ndim == 1:
            exog = exog[:, None]
        if exog.shape[0] != len(y):
            raise ParameterError("exog rows must match the series length")
    width = 0 if exog is None else exog.shape[1]
    if spec.n_exog and spec.n_exog != width:
        raise ParameterError(
            f"spec declares {spec.n_exog} exogenous columns, got {width}"
        )
    d, D, s = spec.d, spec.seasonal_d, spec.period
    w, prefixes = difference(y, d, D, s)
    wx = None
    if exog is not None:
        wx = np.column_stack([difference(exog[:, j], d, D, s)[0]
                              for j in range(exog.shape[1])])
    n_w = len(w)
    needed = max(5 * spec.n_structure, 1)
    if n_w < needed:
        raise InsufficientDataError(
            f"{n_w} differenced observations, need at least {needed} "
            f"for {spec.n_structure} coefficients"
        )
    n_exog = 0 if wx is None else wx.shape[1]
    mean_w = float(np.mean(w))
    scale_w = float(np.std(w))
    if scale_w == 0.0:
        scale_w = 1.0
    dim = spec.k_trend + spec.n_structure + n_exog
    floor = SIGMA2_FLOOR * max(1.0, float(np.mean(w * w)))

    def negloglik(u: np.ndarray) -> float:
        params = _unpack(u, spec, n_exog, mean_w, scale_w)
        ystar = w - _deterministic(params, wx, n_w)
        try:
            state = build_state_space(spec, params)
            v, f, _, _ = _run_filter(ystar, state.transition, state.selection)
        except FitFailureError:
            return _PENALTY
        ssq = float(np.sum(v * v / f))
        sigma2 = max(ssq / n_w, floor)
        ll = (-0.5 * n_w * (LOG2PI + math.log(sigma2))
              - 0.5 * float(np.sum(np.log(f))) - 0.5 * ssq / sigma2)
        if not math.isfinite(ll):
            return _PENALTY
        return -ll

    best = None
    if dim == 0:
        best_x = np.zeros(0)
    else:
        for offset in RESTART_OFFSETS:
            res = minimize(
                negloglik,
                np.full(dim, offset),
                method="Nelder-Mead",
                options={"maxiter": FIT_MAXITER, "fatol": FIT_FATOL, "xatol": 1e-6},
            )
            if best is None or res.fun < best.fun:
                best = res
        if best.fun >= _PENALTY:
            raise FitFailureError("no finite-likelihood model found")
        best_x = best.x

    params = _unpack(best_x, spec, n_exog, mean_w, scale_w)
    state = build_state_space(spec, params)
    ystar = w - _deterministic(params, wx, n_w)
    kalman = kalman_loglik(ystar, state)
    k = dim + 1  # innovation variance counts as a parameter
    aic = 2.0 * k - 2.0 * kalman.loglik
    return SarimaxFit(
        spec=spec,
        params=params,
        sigma2=kalman.sigma2,
        loglik=kalman.loglik,
        aic=float(aic),
        state=state,
        kalman=kalman,
        endog=y,
        exog=exog,
        w=w,
        prefixes=prefixes,
    )


def _future_deterministic(fitted: SarimaxFit, steps: int, exog_future) -> np.ndarray:
    """Trend plus regressor terms for the differenced equation at horizons
    1..steps; future exog rows are differenced together with the observed
    tail so the stages line up."""
    params = fitted.params
    det = np.full(steps, params.trend_const)
    if fitted.exog is None:
        if exog_future is not None:
            raise ParameterError("model was fit without exog")
        return det
    if exog_future is None:
        raise ParameterError("model was fit with exog; exog_future is required")
    exog_future = np.asarray(exog_future, dtype=np.float64)
    if exog_future.ndim == 1:
        exog_future = exog_future[:, None]
    if exog_future.shape[0] < steps or exog_future.shape[1] != fitted.exog.shape[1]:
        raise ParameterError("exog_future must supply every forecast step")
    d, D, s = fitted.spec.d, fitted.spec.seasonal_d, fitted.spec.period
    L = d + s * D
    joined = np.vstack([fitted.exog[len(fitted.exog) - L :], exog_future[:steps]])
    wx = np.column_stack([difference(joined[:, j], d, D, s)[0]
                          for j in range(joined.shape[1])])
    return det + wx @ params.beta


def forecast(fitted: SarimaxFit, steps: int, exog_future=None):
    """Mean and variance of the next ``steps`` observations on the original
    scale.

    Differencing is undone inside an extended state that carries the last
    ``d + s D`` forecast levels along with the ARMA state, so the forecast
    variance accounts for the accumulated uncertainty of re-integration.

    Returns (mean, variance) arrays of length ``steps``.
    """
    if steps < 1:
        raise ParameterError("steps must be >= 1")
    spec = fitted.spec
    d, D, s = spec.d, spec.seasonal_d, spec.period
    L = d + s * D
    if L > len(fitted.endog):
        raise InsufficientDataError("series shorter than the differencing depth")
    poly = integration_poly(d, D, s)
    c = poly[1:]
    state = fitted.state
    m = state.m
    L_eff = max(L, 1)
    dim = m + L_eff

    A = np.zeros((dim, dim))
    A[:m, :m] = state.transition
    A[m, :m] = state.design
    A[m, m : m + L] = -c
    for j in range(L_eff - 1):
        A[m + 1 + j, m + j] = 1.0
    B = np.zeros(dim)
    B[:m] = state.selection

    mu = np.zeros(dim)
    mu[:m] = fitted.kalman.predicted_state
    if L > 0:
        mu[m : m + L] = fitted.endog[::-1][:L]
    else:
        mu[m] = fitted.endog[-1]
    S = np.zeros((dim, dim))
    S[:m, :m] = fitted.kalman.predicted_cov
    noise = fitted.sigma2 * np.outer(B, B)

    det = _future_deterministic(fitted, steps, exog_future)
    mean = np.empty(steps)
    var = np.empty(steps)
    for h in range(steps):
        mu = A @ mu
        mu[m] += det[h]
        S = A @ S @ A.T + noise
        S = (S + S.T) / 2.0
        mean[h] = mu[m]
        var[h] = S[m, m]
    return mean, var


def in_sample_predictions(fitted: SarimaxFit) -> np.ndarray:
    """One-step-ahead predictions on the original scale.

    Each prediction combines the filtered prediction of the differenced
    value with the actually observed past levels; the first ``d + s D``
    positions have no differenced counterpart and return the observations
    themselves.
    """
    spec = fitted.spec
    d, D, s = spec.d, spec.seasonal_d, spec.period
    L = d + s * D
    y = fitted.endog
    n = len(y)
    pred = y.astype(np.float64).copy()
    tail = fitted.w - fitted.kalman.innovations
    c = integration_poly(d, D, s)[1:]
    for i in range(1, L + 1):
        tail = tail - c[i - 1] * y[L - i : n - i]
    pred[L:] = tail
    return pred


def select_order(y, specs, exog=None):
    """Fit every candidate spec and keep the lowest AIC (ties go to the
    earlier candidate).

    Returns (best_fit, table) where table is a list of (spec, aic) pairs in
    input order, with ``inf`` for candidates that failed to fit.
    """
    specs = list(specs)
    if not specs:
        raise ParameterError("select_order needs at least one candidate")
    best_fit = None
    best_key = None
    table = []
    for spec in specs:
        try:
            fitted = fit(y, spec, exog=exog)
        except (FitFailureError, InsufficientDataError):
            table.append((spec, math.inf))
            continue
        table.append((spec, fitted.aic))
        # Ties go to the model with fewer parameters, then to grid order.
        n_params = (spec.p + spec.q + spec.P + spec.Q
                    + (1 if spec.trend == "c" else 0) + 1)
        key = (fitted.aic, n_params)
        if best_key is None or key < best_key:
            best_key = key
            best_fit = fitted
    if best_fit is None:
        raise FitFailureError("every candidate model order failed to fit")
    return best_fit, table


def fit_to_dict(fitted: SarimaxFit) -> dict:
    """JSON-ready record of a fitted model: spec, coefficients, scores."""
    spec = fitted.spec
    return {
        "spec": {
            "order": list(spec.order),
            "seasonal_order": list(spec.seasonal_order),
            "trend": spec.trend,
            "n_exog": spec.n_exog,
        },
        "params": {
            "ar": [float(v) for v in fitted.ar],
            "ma": [float(v) for v in fitted.ma],
            "seasonal_ar": [float(v) for v in fitted.seasonal_ar],
            "seasonal_ma": [float(v) for v in fitted.seasonal_ma],
            "exog_beta": [float(v) for v in fitted.exog_beta],
            "trend_const": float(fitted.trend_const),
            "sigma2": float(fitted.sigma2),
        },
        "log_likelihood": float(fitted.log_likelihood),
        "aic": float(fitted.aic),
        "n_obs": fitted.n_obs,
    }
