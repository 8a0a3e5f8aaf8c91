"""Dense statevector ground truth, independent of the Pauli-frame machinery.

States are numpy arrays of shape ``(2,)*n + (B,)``; axis ``q`` is qubit ``q``
and the trailing axis batches ``B`` input states through the same gates.
Gates act as explicit 2x2 matrices or index permutations, and checks are
applied qubit by qubit as axis flips and signs, so nothing here relies on
the conjugation rules used elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .circuit import Circuit, validate_circuit
from .codes import Classification, DetectionContext, classify_residual
from .faults import ERROR_LABELS, FaultSite, fault_sites, logical_error_count
from .pauli import PauliOperator, pauli_from_string

__all__ = [
    "DEFAULT_CAP",
    "QubitCapExceeded",
    "OracleError",
    "McEstimate",
    "codespace_basis",
    "logical_matrix",
    "run_circuit",
    "verify_logical_action",
    "verify_fault_classification",
    "verify_all_faults",
    "monte_carlo_rates",
]

DEFAULT_CAP = 22
TOL = 1e-9

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}
_S2 = 1 / math.sqrt(2)
_ONE_Q = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _S2,
    "SX+": (_I2 - 1j * _X) * _S2,
    "SX-": (_I2 + 1j * _X) * _S2,
    "SZ+": np.diag([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)]),
    "SZ-": np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)]),
}
# +1 eigenvectors used for ancilla preparation
_PLUS = {
    "Z": np.array([1, 0], dtype=complex),
    "X": np.array([1, 1], dtype=complex) * _S2,
    "Y": np.array([1, 1j], dtype=complex) * _S2,
}


class OracleError(RuntimeError):
    pass


class QubitCapExceeded(OracleError):
    def __init__(self, n: int, cap: int):
        self.n, self.cap = n, cap
        super().__init__(f"{n} qubits exceeds the statevector cap of {cap}")


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise QubitCapExceeded(n, cap)


# -- elementary operations ---------------------------------------------------

def _apply_1q(psi: np.ndarray, U: np.ndarray, q: int) -> np.ndarray:
    v = psi.reshape(2 ** q, 2, -1)
    out = np.empty_like(v)
    a, b = v[:, 0, :], v[:, 1, :]
    (u00, u01), (u10, u11) = U
    out[:, 0, :] = u00 * a + u01 * b if u01 else u00 * a
    out[:, 1, :] = u10 * a + u11 * b if u10 else u11 * b
    return out.reshape(psi.shape)


def _apply_cnot(psi: np.ndarray, c: int, t: int) -> np.ndarray:
    out = psi.copy()
    sl = [slice(None)] * psi.ndim
    sl[c] = 1
    out[tuple(sl)] = np.flip(psi[tuple(sl)], axis=t if t < c else t - 1)
    return out


def _apply_pauli(psi: np.ndarray, p: PauliOperator) -> np.ndarray:
    """Whole-register Pauli: flip the X axes (a view), then one broadcast sign.

    ``X^x Z^z |i> = (-1)^{i·z} |i^x>``, so on a Z qubit that is also flipped
    the sign pattern is reversed.
    """
    n = psi.ndim - 1
    xs, sign_axes = [], []
    n_y = 0
    for q in p.support_indices():
        ch = p.component(q)
        if ch in "XY":
            xs.append(q)
        if ch in "ZY":
            sign_axes.append((q, ch == "Y"))
        n_y += ch == "Y"
    out = np.flip(psi, axis=tuple(xs)) if xs else psi
    coeff = 1j ** ((p.phase_exponent + n_y) % 4)
    if not sign_axes:
        return out * coeff
    shape = [1] * psi.ndim
    sign = np.ones(shape, dtype=complex) * coeff
    for q, flipped in sign_axes:
        sh = shape.copy()
        sh[q] = 2
        sign = sign * np.array([-1.0, 1.0] if flipped else [1.0, -1.0]).reshape(sh)
    return out * sign


def _apply_letters(psi: np.ndarray, letters: dict[int, str]) -> np.ndarray:
    n = psi.ndim - 1
    chars = ["I"] * n
    for q, ch in letters.items():
        chars[q] = ch
    return _apply_pauli(psi, pauli_from_string("".join(chars)))


def _project_plus(psi: np.ndarray, p: PauliOperator) -> np.ndarray:
    return 0.5 * (psi + _apply_pauli(psi, p))


def _inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-batch <a|b> for arrays with a trailing batch axis."""
    B = a.shape[-1]
    if B == 1:
        return np.array([np.vdot(a.reshape(-1), b.reshape(-1))])
    return np.einsum("ij,ij->j", a.reshape(-1, B).conj(), b.reshape(-1, B))


def _norms(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.real(_inner(a, a)))


# -- codespace ---------------------------------------------------------------

def codespace_basis(ctx: DetectionContext, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Logical basis ``|x̄>`` for the data blocks of ``ctx``, shape ``(2,)*n_data + (2**k,)``.

    ``|0̄>`` is the projection of a computational state onto the +1 space of
    every stabilizer generator and logical Z; ``|x̄> = X̄^x |0̄>`` with bit ``j``
    of ``x`` (most significant first) selecting logical qubit ``j``.
    """
    n = ctx.data_qubits
    _check_cap(n, cap)
    code = ctx.code
    gens = [g.embed(n, b * code.n) for b in range(ctx.blocks) for g in code.generators]
    lzs = [z.embed(n, b * code.n) for b in range(ctx.blocks) for z in code.logical_z]
    lxs = [x.embed(n, b * code.n) for b in range(ctx.blocks) for x in code.logical_x]
    k = len(lzs)
    zero = None
    for start in range(2 ** n):
        psi = np.zeros((2,) * n + (1,), dtype=complex)
        idx = tuple((start >> (n - 1 - q)) & 1 for q in range(n))
        psi[idx + (0,)] = 1.0
        for s in gens + lzs:
            psi = _project_plus(psi, s)
        nrm = _norms(psi)[0]
        if nrm > 1e-6:
            zero = psi / nrm
            break
        if start > 4096:
            break
    if zero is None:
        raise OracleError("projector annihilated every probe state; inconsistent code")
    cols = []
    for x in range(2 ** k):
        psi = zero
        for j in range(k):
            if (x >> (k - 1 - j)) & 1:
                psi = _apply_pauli(psi, lxs[j])
        cols.append(psi[..., 0])
    basis = np.stack(cols, axis=-1)
    gram = _gram(basis)
    if not np.allclose(gram, np.eye(2 ** k), atol=TOL):
        raise OracleError("logical basis is not orthonormal")
    return basis


def _gram(basis: np.ndarray) -> np.ndarray:
    B = basis.shape[-1]
    m = basis.reshape(-1, B)
    return m.conj().T @ m


def logical_matrix(p: PauliOperator) -> np.ndarray:
    """Dense ``2**k`` matrix of a k-qubit Pauli, qubit 0 most significant."""
    m = np.array([[1.0]], dtype=complex)
    for q in range(p.n):
        m = np.kron(m, _PAULI[p.component(q)])
    return m * (1j ** p.phase_exponent)


def _with_ancillas(data: np.ndarray, ancillas: dict[int, str]) -> np.ndarray:
    psi = data
    for q in sorted(ancillas):
        psi = np.tensordot(psi, _PLUS[ancillas[q]], axes=0)  # appended after batch axis
        psi = np.moveaxis(psi, -1, q)
    return psi


def _strip_ancillas(psi: np.ndarray, ancillas: dict[int, str]) -> np.ndarray:
    for q in sorted(ancillas, reverse=True):
        psi = np.tensordot(_PLUS[ancillas[q]].conj(), psi, axes=([0], [q]))
    return psi


# -- circuit simulation ------------------------------------------------------

def _apply_gate(psi: np.ndarray, g, theta: float) -> np.ndarray:
    if g.op == "CNOT":
        return _apply_cnot(psi, *g.qubits)
    if g.op == "ROT":
        q = g.qubits[0]
        return math.cos(theta) * psi - 1j * math.sin(theta) * _apply_1q(psi, _PAULI[g.pauli], q)
    if g.op in ("APREP", "AMEAS"):
        return psi
    return _apply_1q(psi, _ONE_Q[g.op], g.qubits[0])


def run_circuit(c: Circuit, psi: np.ndarray, theta: float, faults: dict[int, dict[int, str]] | None = None,
                start: int = 0, rot_branch: str | None = None) -> np.ndarray:
    """Apply gates ``start..`` to ``psi``.  ``faults[i]`` maps qubit -> Pauli
    letter inserted right after gate ``i``.  ``rot_branch`` replaces the
    rotation by its identity (``"I"``) or ``-i·axis`` (``"P"``) component."""
    faults = faults or {}
    for i in range(start, len(c.gates)):
        g = c.gates[i]
        if g.op == "ROT" and rot_branch is not None:
            if rot_branch == "P":
                psi = -1j * _apply_1q(psi, _PAULI[g.pauli], g.qubits[0])
        else:
            psi = _apply_gate(psi, g, theta)
        if i in faults:
            psi = _apply_letters(psi, faults[i])
    return psi


def _prepare_inputs(c: Circuit, ctx: DetectionContext, cap: int):
    """Logical basis with ancillas attached, the bare basis, and the adapted context."""
    _check_cap(c.n_qubits, cap)
    validate_circuit(c)
    actx = ctx.for_circuit(c)
    basis = codespace_basis(actx, cap)
    return _with_ancillas(basis, c.ancillas), basis, actx


def _ideal_outputs(basis: np.ndarray, ctx: DetectionContext, target: PauliOperator, theta: float) -> np.ndarray:
    """exp(-iθ P̄) applied to every logical basis state (physical data register)."""
    L = math.cos(theta) * np.eye(basis.shape[-1]) - 1j * math.sin(theta) * logical_matrix(target)
    return np.tensordot(basis, L, axes=([basis.ndim - 1], [0]))


def _aligned_deviation(out: np.ndarray, ideal: np.ndarray) -> float:
    """Max per-state distance after removing one global phase (set on the
    first state with a nonzero overlap)."""
    ov = _inner(ideal, out)
    j = int(np.argmax(np.abs(ov) > 1e-6)) if np.any(np.abs(ov) > 1e-6) else 0
    phase = ov[j] / abs(ov[j]) if abs(ov[j]) > 0 else 1.0
    diff = out - phase * ideal
    return float(np.max(_norms(diff)))


def _parse_target(target, k: int) -> PauliOperator:
    if isinstance(target, PauliOperator):
        if target.n != k:
            raise ValueError(f"logical target acts on {target.n} qubits, code block(s) encode {k}")
        return target
    from .codes import parse_logical_label

    phase, letters = parse_logical_label(str(target), k)
    p = pauli_from_string(letters)
    return PauliOperator(p.x, p.z, p.n, phase)


@dataclass
class LogicalActionReport:
    max_deviation: float
    sign: int  # +1 if the circuit applies exp(-iθP̄), -1 if exp(+iθP̄)
    per_theta: list


def verify_logical_action(c: Circuit, ctx: DetectionContext, logical_target, thetas,
                          cap: int = DEFAULT_CAP) -> LogicalActionReport:
    """Compare the postselected action of ``c`` on every logical basis state
    with ``exp(∓iθ P̄)``.  The sign of the realized operator only flips the
    angle, so both orientations are tried and the better one (over all θ) is
    reported."""
    thetas = list(thetas)
    if not thetas:
        raise ValueError("need at least one angle")
    psi0, basis, actx = _prepare_inputs(c, ctx, cap)
    target = _parse_target(logical_target, psi0.shape[-1].bit_length() - 1)
    devs = {1: [], -1: []}
    for th in thetas:
        out = _strip_ancillas(run_circuit(c, psi0, th), c.ancillas)
        nrm = _norms(out)
        if np.min(nrm) < 1e-6:
            raise OracleError("postselection annihilated the state")
        for s in (1, -1):
            devs[s].append(_aligned_deviation(out, _ideal_outputs(basis, actx, target, s * th)))
    sign = 1 if max(devs[1]) <= max(devs[-1]) else -1
    return LogicalActionReport(max(devs[sign]), sign, devs[sign])


# -- fault classification ----------------------------------------------------

@dataclass
class FaultCheck:
    site: FaultSite
    oracle: Classification
    analysis: Classification

    @property
    def agrees(self) -> bool:
        return self.oracle == self.analysis


def _classify_output(out: np.ndarray, checks, ancillas, ideal: np.ndarray) -> Classification:
    # Probability of a -1 outcome for each check and input.
    # ||(I-S)/2 psi||^2 = (<psi|psi> - Re<psi|S|psi>) / 2
    nrm2 = np.real(_inner(out, out))
    minus = np.stack([0.5 * (nrm2 - np.real(_inner(out, _apply_pauli(out, s)))) for s in checks])
    flagged = np.max(minus, axis=0) > TOL
    if flagged.all():
        return Classification.DETECTED
    if flagged.any():
        raise OracleError("check outcome depends on the logical input")
    data = _strip_ancillas(out, ancillas)
    return Classification.BENIGN if _aligned_deviation(data, ideal) < TOL else Classification.LOGICAL


def _probe_inputs(c, ctx, cap, max_batch_log2, rng):
    psi0, basis, actx = _prepare_inputs(c, ctx, cap)
    B = psi0.shape[-1]
    if c.n_qubits + B.bit_length() - 1 <= max_batch_log2:
        return psi0, basis, None, actx
    # Too large to batch the whole basis: probe with one random logical superposition.
    coeffs = rng.normal(size=(B, 1)) + 1j * rng.normal(size=(B, 1))
    coeffs /= np.linalg.norm(coeffs, axis=0)
    return np.tensordot(psi0, coeffs, axes=([psi0.ndim - 1], [0])), basis, coeffs, actx


def verify_all_faults(c: Circuit, ctx: DetectionContext, logical_target, theta: float = 0.37,
                      sites=None, cap: int = DEFAULT_CAP, max_batch_log2: int = 18,
                      seed: int = 0) -> list[FaultCheck]:
    """Classify fault sites by simulation and compare with fault analysis.

    All sites by default.  The prefix of the circuit is simulated once per
    gate position and reused for the 15 errors at that position.
    """
    rng = np.random.default_rng(seed)
    psi0, basis, coeffs, actx = _probe_inputs(c, ctx, cap, max_batch_log2, rng)
    target = _parse_target(logical_target, basis.shape[-1].bit_length() - 1)
    # Orientation of the rotation from the fault-free run on the same inputs.
    clean = _strip_ancillas(run_circuit(c, psi0, theta), c.ancillas)
    candidates = []
    for sgn in (1, -1):
        ideal = _ideal_outputs(basis, actx, target, sgn * theta)
        if coeffs is not None:
            ideal = np.tensordot(ideal, coeffs, axes=([ideal.ndim - 1], [0]))
        candidates.append((_aligned_deviation(clean, ideal), sgn, ideal))
    dev, _, ideal = min(candidates, key=lambda t: t[0])
    if dev > TOL:
        raise OracleError(f"fault-free circuit deviates from exp(-iθP̄) by {dev:.3g}")
    rep = logical_error_count(c, ctx, with_sites=False)
    cnots = c.cnot_indices()
    if sites is None:
        sites = fault_sites(c)
    by_gate: dict[int, list[FaultSite]] = {}
    for s in sites:
        by_gate.setdefault(s.gate_index, []).append(s)
    checks = actx.check_operators
    results = []
    psi, pos = psi0, 0
    for gi in sorted(by_gate):
        psi = _advance(c, psi, theta, pos, gi + 1)
        pos = gi + 1
        ctrl, tgt = c.gates[gi].qubits
        for site in by_gate[gi]:
            letters = {ctrl: site.error[0], tgt: site.error[1]}
            out = run_circuit(c, _apply_letters(psi, letters), theta, start=pos)
            got = _classify_output(out, checks, c.ancillas, ideal)
            code = int(rep.classes[15 * cnots.index(gi) + ERROR_LABELS.index(site.error)])
            expected = {0: Classification.DETECTED, 1: Classification.BENIGN, 2: Classification.LOGICAL}[code]
            results.append(FaultCheck(site, got, expected))
    return results


def _advance(c: Circuit, psi: np.ndarray, theta: float, start: int, stop: int) -> np.ndarray:
    for i in range(start, stop):
        psi = _apply_gate(psi, c.gates[i], theta)
    return psi


def verify_fault_classification(c: Circuit, ctx: DetectionContext, f: FaultSite, logical_target,
                                theta: float = 0.37, cap: int = DEFAULT_CAP) -> FaultCheck:
    return verify_all_faults(c, ctx, logical_target, theta, [f], cap)[0]


# -- Monte Carlo -------------------------------------------------------------

@dataclass
class McEstimate:
    shots: int
    accepted: int
    logical_errors: int
    p_S_hat: float
    p_S_se: float
    p_L_hat: float
    p_L_se: float
    rejection_hat: float
    mean_infidelity: float
    seed: int
    p: float
    q: float
    theta: float
    distinct_fault_patterns: int = 0
    # Pauli logical faults plus sin^2(δθ) per clean accepted shot; its
    # expectation is q + (l/15) p at first order.
    p_L_rate_matched: float = 0.0
    p_L_rate_matched_se: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


MC_BLOCK = 1 << 15
_INPUT_STREAM = 2 ** 32 - 1  # stream id for the random logical input
INFIDELITY_THRESHOLD = 1e-6


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


class _McModel:
    """Per-circuit state for Monte Carlo: fixed random logical input, the
    ideal output, and cached branch overlaps per fault pattern."""

    def __init__(self, c: Circuit, ctx: DetectionContext, logical_target, theta: float,
                 seed: int, cap: int):
        _check_cap(c.n_qubits, cap)
        psi_in, basis, actx = _prepare_inputs(c, ctx, cap)
        B = psi_in.shape[-1]
        target = _parse_target(logical_target, B.bit_length() - 1)
        rng0 = _block_rng(seed, _INPUT_STREAM)
        coeff = rng0.normal(size=B) + 1j * rng0.normal(size=B)
        coeff /= np.linalg.norm(coeff)
        self.psi = np.tensordot(psi_in, coeff, axes=([psi_in.ndim - 1], [0]))[..., None]
        sign = verify_logical_action(c, ctx, target, [theta], cap).sign
        ideal_data = np.tensordot(_ideal_outputs(basis, actx, target, sign * theta), coeff,
                                  axes=([basis.ndim - 1], [0]))[..., None]
        self.ideal = _with_ancillas(ideal_data, c.ancillas)
        self.c = c
        self.checks = actx.check_operators
        self.cnots = c.cnot_indices()
        self.theta = theta
        self.seed = seed
        self.cache: dict[tuple, tuple] = {}

    def branch_stats(self, key: tuple) -> tuple:
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        faults = {}
        for gpos, e in key:
            gi = self.cnots[gpos]
            ctrl, tgt = self.c.gates[gi].qubits
            faults[gi] = {ctrl: ERROR_LABELS[e][0], tgt: ERROR_LABELS[e][1]}
        a = run_circuit(self.c, self.psi, 0.0, faults, rot_branch="I")
        b = run_circuit(self.c, self.psi, 0.0, faults, rot_branch="P")
        for chk in self.checks:
            a = _project_plus(a, chk)
            b = _project_plus(b, chk)
        stats = (float(np.real(_inner(a, a))[0]), float(np.real(_inner(b, b))[0]),
                 complex(_inner(a, b)[0]), complex(_inner(self.ideal, a)[0]),
                 complex(_inner(self.ideal, b)[0]))
        self.cache[key] = stats
        return stats

    def run_block(self, block: int, n: int, p: float, q: float) -> tuple:
        G = len(self.cnots)
        rng = _block_rng(self.seed, block)
        # Draw full-size arrays so a block's stream does not depend on n.
        u = rng.random((MC_BLOCK, G))[:n]
        which = rng.integers(0, 15, size=(MC_BLOCK, G))[:n]
        dtheta = rng.normal(0.0, math.sqrt(q), size=MC_BLOCK)[:n] if q > 0 else np.zeros(n)
        uacc = rng.random(MC_BLOCK)[:n]
        hit = u < p
        groups: dict[tuple, list[int]] = {}
        faulty = np.flatnonzero(hit.any(axis=1))
        for i in faulty:
            key = tuple((int(g), int(which[i, g])) for g in np.flatnonzero(hit[i]))
            groups.setdefault(key, []).append(int(i))
        clean = np.ones(n, dtype=bool)
        clean[faulty] = False
        ang = self.theta + dtheta
        cs, sn = np.cos(ang), np.sin(ang)
        accepted = logical = 0
        infid_sum = rm_sum = rm_sq = 0.0
        c0, s0 = math.cos(self.theta), math.sin(self.theta)
        selections = [((), np.flatnonzero(clean))] + [(k, np.array(v)) for k, v in sorted(groups.items())]
        for key, sel in selections:
            if sel.size == 0:
                continue
            aa, bb, ab, ia, ib = self.branch_stats(key)
            cc, ss = cs[sel], sn[sel]
            pacc = cc * cc * aa + ss * ss * bb + 2 * cc * ss * ab.real
            pacc = np.where(pacc > 1 - 1e-12, 1.0, np.where(pacc < 1e-12, 0.0, pacc))
            acc = uacc[sel] < pacc
            ov = cc * ia + ss * ib
            fid = np.abs(ov) ** 2 / np.where(pacc > 0, pacc, 1.0)
            infid = np.clip(1 - fid, 0.0, 1.0)
            accepted += int(acc.sum())
            logical += int((acc & (infid > INFIDELITY_THRESHOLD)).sum())
            infid_sum += float(infid[acc].sum())
            # Rate-matched score: 1 for a Pauli logical fault (judged at the
            # nominal angle), otherwise sin^2 of the angle error.
            p0 = c0 * c0 * aa + s0 * s0 * bb + 2 * c0 * s0 * ab.real
            pauli_logical = p0 > 1e-12 and 1 - abs(c0 * ia + s0 * ib) ** 2 / p0 > INFIDELITY_THRESHOLD
            score = np.ones(int(acc.sum())) if pauli_logical else np.sin(dtheta[sel][acc]) ** 2
            rm_sum += float(score.sum())
            rm_sq += float((score * score).sum())
        return accepted, logical, infid_sum, rm_sum, rm_sq


def _block_plan(shots: int) -> list[tuple[int, int]]:
    return [(b, min(MC_BLOCK, shots - b * MC_BLOCK)) for b in range(-(-shots // MC_BLOCK))]


def _mc_worker(args):
    c, ctx, target, theta, seed, cap, p, q, plan = args
    model = _McModel(c, ctx, target, theta, seed, cap)
    out = [model.run_block(b, n, p, q) for b, n in plan]
    return out, set(model.cache)


def monte_carlo_rates(c: Circuit, ctx: DetectionContext, logical_target, p: float, q: float,
                      shots: int, seed: int, theta: float = 0.37, cap: int = DEFAULT_CAP,
                      workers: int = 1) -> McEstimate:
    """Sample depolarizing CNOT faults and Gaussian angle noise, simulate,
    postselect on all checks and compare with the ideal logical action.

    Shots are drawn in fixed blocks of ``MC_BLOCK`` with one RNG stream per
    block, so results depend only on ``seed`` and ``shots``, never on
    ``workers``.  For each distinct fault pattern the circuit is simulated
    once per rotation branch (identity and axis); the angle enters only
    through ``cos``/``sin``.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ValueError("rates must lie in [0, 1]")
    _check_cap(c.n_qubits, cap)
    plan = _block_plan(shots)
    workers = max(1, min(workers, len(plan)))
    if workers == 1:
        per_block, patterns = _mc_worker((c, ctx, logical_target, theta, seed, cap, p, q, plan))
    else:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [plan[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_mc_worker, [(c, ctx, logical_target, theta, seed, cap, p, q, ch)
                                             for ch in chunks]))
        by_block = {}
        patterns = set()
        for ch, (res, pats) in zip(chunks, parts):
            by_block.update({b: r for (b, _), r in zip(ch, res)})
            patterns |= pats
        per_block = [by_block[b] for b, _ in plan]
    accepted = sum(r[0] for r in per_block)
    logical = sum(r[1] for r in per_block)
    infid_sum = math.fsum(r[2] for r in per_block)
    rm_mean = math.fsum(r[3] for r in per_block) / shots
    rm_var = max(math.fsum(r[4] for r in per_block) / shots - rm_mean ** 2, 0.0)
    p_S = accepted / shots
    p_L = logical / shots
    return McEstimate(
        shots=shots, accepted=accepted, logical_errors=logical,
        p_S_hat=p_S, p_S_se=math.sqrt(p_S * (1 - p_S) / shots),
        p_L_hat=p_L, p_L_se=math.sqrt(p_L * (1 - p_L) / shots),
        rejection_hat=1 - p_S,
        mean_infidelity=infid_sum / accepted if accepted else float("nan"),
        seed=seed, p=p, q=q, theta=theta, distinct_fault_patterns=len(patterns),
        p_L_rate_matched=rm_mean, p_L_rate_matched_se=math.sqrt(rm_var / shots),
    )
