"""Stochastic dynamics of the cavity mode phases.

Each of the N modes inside the filter band carries a phase theta_m driven by
modulation-generated sideband coupling to its neighbors and by amplifier
noise:

    d(theta_m)/dt = mu_M * [sin(theta_{m-1} - theta_m)
                            + sin(theta_{m+1} - theta_m)] + q_m,

with q_m independent white noise of strength 2*T_N.  The drift is the
gradient of H = -mu_M * sum_m cos(theta_{m-1} - theta_m), so the stationary
distribution is the Gibbs measure exp(-H/T_N).  In the weak-noise limit the
neighbor phase differences become Gaussian with variance 2*beta_N, where
beta_N = T_N / (2*mu_M), and the ensemble-averaged intensity waveform tends
to the comb function T_{beta_N}.

Amplitude fluctuations are frozen (r_m constant); phases are kept unwrapped
so cumulative diffusion stays observable, and every statistic defined here
uses phase differences wrapped to (-pi, pi], making it insensitive to both
winding and global phase.
"""

from dataclasses import dataclass, field

import numpy as np

from .engine import RngStream, normal_draws


@dataclass(frozen=True)
class LatticeConfig:
    """Chain size, coupling, noise strength, and integration settings.

    ``mu_m`` is the modulation amplitude (1/time), ``t_n`` the noise
    strength (1/time).  The explicit Euler step requires dt*mu_m <= 0.1.
    """

    n_modes: int
    mu_m: float
    t_n: float
    dt: float
    seed: int = 0
    boundary: str = "open_chain"  # or "periodic"

    def __post_init__(self):
        if self.n_modes < 3:
            raise ValueError("n_modes must be >= 3")
        if self.mu_m <= 0.0:
            raise ValueError("mu_m must be positive")
        if self.t_n < 0.0:
            raise ValueError("t_n must be nonnegative")
        if self.dt <= 0.0 or self.dt * self.mu_m > 0.1:
            raise ValueError("require 0 < dt and dt*mu_m <= 0.1")
        if self.boundary not in ("open_chain", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def beta_n(self) -> float:
        return self.t_n / (2.0 * self.mu_m)


@dataclass
class LatticeState:
    """Unwrapped mode phases at a given time."""

    theta: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.ndim != 1:
            raise ValueError("theta must be a 1-d vector")
        if not np.all(np.isfinite(self.theta)):
            raise ValueError("theta entries must be finite")


@dataclass(frozen=True)
class ModeAmplitudes:
    """Frozen mode amplitudes r_m (all 1 by default elsewhere)."""

    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        if np.all(self.r == 0.0):
            raise ValueError("amplitudes must not all be zero")
        if np.any(self.r < 0.0):
            raise ValueError("amplitudes must be nonnegative")


def _drift(theta: np.ndarray, mu_m: float, periodic: bool) -> np.ndarray:
    """Coupling drift mu_M*[sin(th_{m-1}-th_m) + sin(th_{m+1}-th_m)]."""
    if periodic:
        d = np.roll(theta, 1) - theta          # theta_{m-1} - theta_m
        return mu_m * (np.sin(d) - np.sin(np.roll(d, -1)))
    sd = np.sin(theta[:-1] - theta[1:])        # sin(theta_m - theta_{m+1})
    drift = np.empty_like(theta)
    drift[0] = -sd[0]
    drift[1:-1] = sd[:-1] - sd[1:]
    drift[-1] = sd[-1]
    return mu_m * drift


def step_lattice(state: LatticeState, config: LatticeConfig,
                 stream: RngStream | None = None) -> LatticeState:
    """One explicit stochastic-Euler step.

    theta <- theta + dt*drift + sqrt(2*T_N*dt)*xi with xi standard normal.
    A fresh stream seeded from the config is used when none is passed, so
    repeated single-step calls with the same stream are reproducible.
    """
    theta = state.theta
    if theta.size != config.n_modes:
        raise ValueError("state size does not match config")
    if not np.all(np.isfinite(theta)):
        raise ValueError("non-finite state")
    if stream is None:
        stream = RngStream(config.seed)
    new = theta + config.dt * _drift(theta, config.mu_m,
                                     config.boundary == "periodic")
    if config.t_n > 0.0:
        new = new + np.sqrt(2.0 * config.t_n * config.dt) * \
            normal_draws(stream, config.n_modes)
    return LatticeState(theta=new, time=state.time + config.dt)


def hamiltonian(state: LatticeState, config: LatticeConfig) -> float:
    """H = -mu_M * sum over neighbor pairs of cos(theta_{m-1} - theta_m).

    The drift in :func:`step_lattice` is exactly -dH/dtheta_m.
    """
    theta = state.theta
    if config.boundary == "periodic":
        d = np.roll(theta, 1) - theta
    else:
        d = theta[:-1] - theta[1:]
    return float(-config.mu_m * np.sum(np.cos(d)))


def sample_gibbs(beta_n: float, n_modes: int, seed: int,
                 n_samples: int = 1,
                 boundary: str = "open_chain") -> np.ndarray:
    """Weak-noise steady-state sampler for the open chain.

    Draws independent Gaussian neighbor differences with variance 2*beta_N
    and cumulative-sums them into phases (theta_0 = 0).  Valid as a
    steady-state oracle only in the weak-noise regime: the exact stationary
    link distribution is proportional to exp(cos(d)/(2*beta_N)), whose
    variance exceeds 2*beta_N by a relative O(beta_N) correction.

    Only the open chain is supported: a periodic chain constrains the
    differences to wind back to zero, which breaks their independence.

    Returns an array of shape (n_samples, n_modes); a single sample can be
    wrapped in :class:`LatticeState` directly.
    """
    if boundary != "open_chain":
        raise ValueError("periodic boundary is unsupported: the winding "
                         "constraint breaks link independence")
    if not 0.0 <= beta_n <= 0.5:
        raise ValueError("beta_n must lie in [0, 0.5] (weak-noise regime)")
    if n_modes < 2:
        raise ValueError("n_modes must be >= 2")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    stream = RngStream(seed)
    if beta_n == 0.0:
        return np.zeros((n_samples, n_modes))
    diffs = normal_draws(stream, n_samples * (n_modes - 1))
    diffs = diffs.reshape(n_samples, n_modes - 1) * np.sqrt(2.0 * beta_n)
    theta = np.zeros((n_samples, n_modes))
    np.cumsum(diffs, axis=1, out=theta[:, 1:])
    return theta


def intensity_waveform(state: LatticeState, amps: ModeAmplitudes,
                       s_grid: np.ndarray) -> np.ndarray:
    """Single-realization intensity V(s) = |sum_m r_m e^{i(m s + theta_m)}|^2 / N.

    Ensemble averaging over states is the caller's job (see
    :func:`ensemble_intensity`).
    """
    theta = state.theta
    r = amps.r
    if r.size != theta.size:
        raise ValueError("amplitude and state size mismatch")
    s_grid = np.asarray(s_grid, dtype=float)
    m = np.arange(theta.size)
    phases = np.multiply.outer(s_grid, m) + theta[None, :]  # (S, N)
    field = (r[None, :] * np.exp(1j * phases)).sum(axis=1)
    return np.abs(field) ** 2 / theta.size


def ensemble_intensity(thetas: np.ndarray, amps: ModeAmplitudes,
                       s_grid: np.ndarray):
    """Mean and standard error of V(s) over an ensemble of phase vectors.

    ``thetas`` has shape (n_samples, n_modes).  Returns (mean, se), each of
    the length of ``s_grid``.
    """
    thetas = np.asarray(thetas, dtype=float)
    n_samples, n_modes = thetas.shape
    if amps.r.size != n_modes:
        raise ValueError("amplitude and state size mismatch")
    s_grid = np.asarray(s_grid, dtype=float)
    m = np.arange(n_modes)
    basis = np.exp(1j * np.multiply.outer(m, s_grid))     # (N, S)
    z = amps.r[None, :] * np.exp(1j * thetas)             # (n, N)
    v = np.abs(z @ basis) ** 2 / n_modes                  # (n, S)
    mean = v.mean(axis=0)
    se = v.std(axis=0, ddof=1) / np.sqrt(n_samples)
    return mean, se


def phase_correlation(trajectory, k: int) -> complex:
    """Time-and-site average of e^{i(theta_{m-k} - theta_m)}.

    ``trajectory`` is a sequence of :class:`LatticeState` (or an array of
    phase vectors) sampled after burn-in.  The expected value in the
    weak-noise steady state is exp(-|k|*beta_N), real up to sampling noise.
    """
    thetas = np.asarray([st.theta if isinstance(st, LatticeState) else st
                         for st in trajectory], dtype=float)
    n_modes = thetas.shape[1]
    k = abs(int(k))
    if k >= n_modes:
        raise ValueError("lag k must be smaller than the chain length")
    if k == 0:
        return 1.0 + 0.0j
    d = thetas[:, :-k] - thetas[:, k:]
    return complex(np.exp(1j * d).mean())


@dataclass
class LatticeRunStats:
    """Steady-state statistics accumulated by :func:`run_lattice`.

    ``corr`` holds the site-and-time averaged e^{i(theta_{m-k}-theta_m)}
    for k = 0..max_lag; ``corr_se`` the batch-means standard error of its
    real part.  ``diff_sq`` is the wrapped neighbor-difference second
    moment with batch-means error ``diff_sq_se``.  When trajectory
    recording is on, ``traj_time``/``traj_theta`` hold the decimated phase
    history (rows = recorded steps).
    """

    n_samples: int
    diff_sq: float
    diff_sq_se: float
    corr: np.ndarray
    corr_se: np.ndarray
    mean_energy: float
    final_state: LatticeState = field(repr=False)
    traj_time: np.ndarray | None = None
    traj_theta: np.ndarray | None = None


def run_lattice(config: LatticeConfig, n_steps: int, burn_in: int | None = None,
                sample_every: int = 50, max_lag: int = 10,
                n_batches: int = 20,
                record_every: int | None = None) -> LatticeRunStats:
    """Integrate the chain and accumulate steady-state statistics.

    Statistics are sampled every ``sample_every`` steps after ``burn_in``
    steps (default 10/(mu_M*dt)).  Standard errors come from batch means
    over ``n_batches`` contiguous blocks, which absorbs the autocorrelation
    of the sampled series.  Passing ``record_every`` stores the full phase
    vector every that many steps (trajectory files get large; keep the
    stride coarse).
    """
    if burn_in is None:
        burn_in = int(round(10.0 / (config.mu_m * config.dt)))
    n = config.n_modes
    periodic = config.boundary == "periodic"
    if max_lag >= n:
        raise ValueError("max_lag must be smaller than the chain length")
    stream = RngStream(config.seed)
    theta = np.zeros(n)
    mu_dt = config.dt * config.mu_m
    sigma = np.sqrt(2.0 * config.t_n * config.dt)

    sd = np.empty(n - 1)
    drift = np.empty(n)
    block = 4096
    noise = np.empty((0, n))
    noise_i = 0

    n_total = burn_in + n_steps
    samples_expected = max(1, (n_steps + sample_every - 1) // sample_every)
    batch_len = max(1, samples_expected // n_batches)

    sum_dsq = 0.0
    sum_cos = np.zeros(max_lag + 1)
    sum_sin = np.zeros(max_lag + 1)
    sum_h = 0.0
    count = 0
    batch_dsq: list[float] = []
    batch_corr: list[np.ndarray] = []
    cur_dsq = 0.0
    cur_corr = np.zeros(max_lag + 1)
    cur_count = 0
    rec_time: list[float] = []
    rec_theta: list[np.ndarray] = []

    for i in range(n_total):
        if noise_i >= noise.shape[0]:
            draws = normal_draws(stream, block * n) * sigma
            noise = draws.reshape(block, n)
            noise_i = 0
        if periodic:
            d = np.roll(theta, 1) - theta
            theta += mu_dt * (np.sin(d) - np.sin(np.roll(d, -1))) + noise[noise_i]
        else:
            np.subtract(theta[:-1], theta[1:], out=sd)
            np.sin(sd, out=sd)
            drift[0] = -sd[0]
            drift[-1] = sd[-1]
            np.subtract(sd[:-1], sd[1:], out=drift[1:-1])
            drift *= mu_dt
            theta += drift
            theta += noise[noise_i]
        noise_i += 1

        if record_every is not None and i % record_every == 0:
            rec_time.append((i + 1) * config.dt)
            rec_theta.append(theta.copy())

        if i >= burn_in and (i - burn_in) % sample_every == 0:
            d1 = theta[:-1] - theta[1:]
            dw = (d1 + np.pi) % (2.0 * np.pi) - np.pi
            dsq = float(np.mean(dw * dw))
            sum_dsq += dsq
            cur_dsq += dsq
            sum_h += -config.mu_m * float(np.sum(np.cos(d1)))
            for k in range(max_lag + 1):
                if k == 0:
                    c, s_ = 1.0, 0.0
                else:
                    dk = theta[:-k] - theta[k:]
                    c = float(np.mean(np.cos(dk)))
                    s_ = float(np.mean(np.sin(dk)))
                sum_cos[k] += c
                sum_sin[k] += s_
                cur_corr[k] += c
            count += 1
            cur_count += 1
            if cur_count == batch_len:
                batch_dsq.append(cur_dsq / cur_count)
                batch_corr.append(cur_corr / cur_count)
                cur_dsq = 0.0
                cur_corr = np.zeros(max_lag + 1)
                cur_count = 0

    if count == 0:
        raise ValueError("no samples collected; increase n_steps")
    if cur_count > 0 and len(batch_dsq) == 0:
        batch_dsq.append(cur_dsq / cur_count)
        batch_corr.append(cur_corr / cur_count)

    nb = len(batch_dsq)
    bd = np.array(batch_dsq)
    bc = np.array(batch_corr)
    dsq_se = float(bd.std(ddof=1) / np.sqrt(nb)) if nb > 1 else float("nan")
    corr_se = (bc.std(axis=0, ddof=1) / np.sqrt(nb)) if nb > 1 \
        else np.full(max_lag + 1, np.nan)

    corr = (sum_cos + 1j * sum_sin) / count
    return LatticeRunStats(
        n_samples=count,
        diff_sq=sum_dsq / count,
        diff_sq_se=dsq_se,
        corr=corr,
        corr_se=corr_se,
        mean_energy=sum_h / count,
        final_state=LatticeState(theta=theta, time=n_total * config.dt),
        traj_time=np.array(rec_time) if record_every is not None else None,
        traj_theta=np.array(rec_theta) if record_every is not None else None,
    )
