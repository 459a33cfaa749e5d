"""Exact algebra of complex-weighted Pauli strings.

Strings are packed two bits per qubit as a pair of masks (z, x): bit q of
``x`` means an X on qubit q, bit q of ``z`` a Z, both set a Y.  Group
multiplication tracks the i^k phase exactly (k mod 4), so products never
accumulate rounding error beyond the input coefficients themselves.

Conventions: qubit q addresses basis-index bit q (basis index i has qubit q
in state (i >> q) & 1), letter strings are written qubit 0 first, and the
single-qubit matrices are the usual sigma^x, sigma^y, sigma^z with
sigma^z = diag(1, -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from . import kernels

DENSE_QUBIT_CAP = 16
SPARSE_QUBIT_CAP = 24

_LETTER_TO_ZX = {"I": (0, 0), "X": (0, 1), "Y": (1, 1), "Z": (1, 0)}
_ZX_TO_LETTER = {(0, 0): "I", (0, 1): "X", (1, 1): "Y", (1, 0): "Z"}
_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


class WidthMismatchError(ValueError):
    """Operands target registers of different qubit widths."""


class DeskScaleError(ValueError):
    """Materialization request exceeds the configured qubit caps."""


def _parse_letters(letters: str) -> tuple[int, int]:
    z = x = 0
    for q, letter in enumerate(letters):
        try:
            zb, xb = _LETTER_TO_ZX[letter]
        except KeyError:
            raise ValueError(f"invalid Pauli letter {letter!r}") from None
        z |= zb << q
        x |= xb << q
    return z, x


@dataclass(frozen=True, slots=True)
class PauliTerm:
    """One complex-weighted Pauli string on a fixed-width register."""

    coefficient: complex
    z: int
    x: int
    width: int

    @classmethod
    def from_letters(cls, coefficient: complex, letters: str) -> "PauliTerm":
        z, x = _parse_letters(letters)
        return cls(complex(coefficient), z, x, len(letters))

    @classmethod
    def identity(cls, width: int, coefficient: complex = 1.0) -> "PauliTerm":
        return cls(complex(coefficient), 0, 0, width)

    @property
    def letters(self) -> str:
        return "".join(
            _ZX_TO_LETTER[(self.z >> q) & 1, (self.x >> q) & 1] for q in range(self.width)
        )

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return ((self.z | self.x)).bit_count()

    def sort_key(self) -> tuple[int, ...]:
        return tuple(
            (((self.z >> q) & 1) << 1) | ((self.x >> q) & 1) for q in range(self.width)
        )

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return multiply(self, other)

    def adjoint(self) -> "PauliTerm":
        # every unsigned Pauli string is Hermitian
        return PauliTerm(self.coefficient.conjugate(), self.z, self.x, self.width)

    def scaled(self, factor: complex) -> "PauliTerm":
        return PauliTerm(self.coefficient * factor, self.z, self.x, self.width)

    def apply_into(self, src: np.ndarray, out: np.ndarray) -> None:
        """Accumulate (this term)·src into out, without materializing."""
        phase = _PHASES[(self.z & self.x).bit_count() & 3]
        kernels.apply_term(self.z, self.x, self.coefficient * phase, src, out)

    def matrix(self) -> np.ndarray:
        if self.width > DENSE_QUBIT_CAP:
            raise DeskScaleError(f"dense cap is {DENSE_QUBIT_CAP} qubits")
        dim = 1 << self.width
        mat = np.zeros((dim, dim), dtype=np.complex128)
        cols = np.arange(dim, dtype=np.uint64)
        rows = cols ^ np.uint64(self.x)
        signs = 1.0 - 2.0 * (np.bitwise_count(cols & np.uint64(self.z)) & np.uint8(1))
        phase = _PHASES[(self.z & self.x).bit_count() & 3]
        mat[rows, cols] = self.coefficient * phase * signs
        return mat

    def __repr__(self) -> str:
        return f"PauliTerm({self.coefficient!r}, {self.letters!r})"


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Group product a·b with the exact {1, i, -1, -i} phase."""
    if a.width != b.width:
        raise WidthMismatchError(f"widths {a.width} != {b.width}")
    z = a.z ^ b.z
    x = a.x ^ b.x
    k = (
        (a.z & a.x).bit_count()
        + (b.z & b.x).bit_count()
        + 2 * (a.z & b.x).bit_count()
        - (z & x).bit_count()
    ) & 3
    return PauliTerm(a.coefficient * b.coefficient * _PHASES[k], z, x, a.width)


@dataclass(frozen=True, slots=True)
class StateVector:
    """Dense amplitudes over the computational basis of ``width`` qubits."""

    amplitudes: np.ndarray
    width: int

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.width,):
            raise ValueError("amplitude length must be 2**width")
        if not np.all(np.isfinite(self.amplitudes.view(np.float64))):
            raise ValueError("non-finite amplitudes")

    @classmethod
    def from_array(cls, amplitudes: Sequence[complex]) -> "StateVector":
        arr = np.asarray(amplitudes, dtype=np.complex128)
        width = int(arr.shape[0] - 1).bit_length()
        return cls(arr, width)

    @classmethod
    def basis_state(cls, width: int, index: int) -> "StateVector":
        arr = np.zeros(1 << width, dtype=np.complex128)
        arr[index] = 1.0
        return cls(arr, width)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


class OperatorSum:
    """Canonical sum of Pauli terms: unique letter sequences, zeros dropped,
    terms ordered lexicographically on the packed letters."""

    __slots__ = ("terms", "width")

    def __init__(self, terms: Iterable[PauliTerm], width: int | None = None):
        terms = list(terms)
        if width is None:
            if not terms:
                raise ValueError("width required for an empty OperatorSum")
            width = terms[0].width
        merged: dict[tuple[int, int], complex] = {}
        for term in terms:
            if term.width != width:
                raise WidthMismatchError("inconsistent term widths")
            key = (term.z, term.x)
            merged[key] = merged.get(key, 0.0 + 0.0j) + term.coefficient
        kept = [
            PauliTerm(c, z, x, width) for (z, x), c in merged.items() if c != 0.0
        ]
        kept.sort(key=PauliTerm.sort_key)
        self.terms: tuple[PauliTerm, ...] = tuple(kept)
        self.width: int = width

    # ------------------------------------------------------------------ build
    @classmethod
    def zero(cls, width: int) -> "OperatorSum":
        return cls([], width)

    @classmethod
    def identity(cls, width: int, coefficient: complex = 1.0) -> "OperatorSum":
        return cls([PauliTerm.identity(width, coefficient)], width)

    @classmethod
    def from_term(cls, term: PauliTerm) -> "OperatorSum":
        return cls([term], term.width)

    @classmethod
    def from_letter_map(
        cls, width: int, coefficient: complex, placed: dict[int, str]
    ) -> "OperatorSum":
        """Single term from {qubit: letter}; all other qubits are identity."""
        z = x = 0
        for q, letter in placed.items():
            if not 0 <= q < width:
                raise ValueError(f"qubit {q} outside register of width {width}")
            zb, xb = _LETTER_TO_ZX[letter]
            z |= zb << q
            x |= xb << q
        return cls([PauliTerm(complex(coefficient), z, x, width)], width)

    # -------------------------------------------------------------- structure
    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        if self.width != other.width:
            raise WidthMismatchError("cannot add different widths")
        return OperatorSum(self.terms + other.terms, self.width)

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "OperatorSum":
        return OperatorSum([t.scaled(factor) for t in self.terms], self.width)

    def __mul__(self, factor: complex) -> "OperatorSum":
        return self.scaled(factor)

    __rmul__ = __mul__

    def __matmul__(self, other: "OperatorSum") -> "OperatorSum":
        if self.width != other.width:
            raise WidthMismatchError("cannot multiply different widths")
        return OperatorSum(
            [multiply(a, b) for a in self.terms for b in other.terms], self.width
        )

    def adjoint(self) -> "OperatorSum":
        return OperatorSum([t.adjoint() for t in self.terms], self.width)

    def commutator(self, other: "OperatorSum") -> "OperatorSum":
        return (self @ other) - (other @ self)

    def embed(self, width: int, offset: int = 0) -> "OperatorSum":
        """Same operator on a wider register, qubits shifted by ``offset``."""
        if offset < 0 or self.width + offset > width:
            raise ValueError("embedding does not fit the target register")
        return OperatorSum(
            [
                PauliTerm(t.coefficient, t.z << offset, t.x << offset, width)
                for t in self.terms
            ],
            width,
        )

    def one_norm(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def is_hermitian(self, tol: float = 0.0) -> bool:
        diff = self - self.adjoint()
        return all(abs(t.coefficient) <= tol for t in diff.terms)

    # ------------------------------------------------------------ numerics
    def apply(self, state: StateVector) -> StateVector:
        """Term-by-term action; never materializes the matrix."""
        if state.width != self.width:
            raise WidthMismatchError("operator and state widths differ")
        out = np.zeros_like(state.amplitudes)
        src = np.ascontiguousarray(state.amplitudes)
        for term in self.terms:
            term.apply_into(src, out)
        return StateVector(out, self.width)

    def apply_array(self, src: np.ndarray) -> np.ndarray:
        out = np.zeros_like(src)
        for term in self.terms:
            term.apply_into(src, out)
        return out

    def materialize(
        self, sparse: bool = False, dense_cap: int = None, sparse_cap: int = None
    ):
        """Dense ndarray (or CSR matrix) equal to the sum of Kronecker products."""
        dense_cap = DENSE_QUBIT_CAP if dense_cap is None else dense_cap
        sparse_cap = SPARSE_QUBIT_CAP if sparse_cap is None else sparse_cap
        if sparse:
            if self.width > sparse_cap:
                raise DeskScaleError(f"sparse cap is {sparse_cap} qubits")
            dim = 1 << self.width
            cols = np.arange(dim, dtype=np.uint64)
            blocks = []
            for t in self.terms:
                rows = cols ^ np.uint64(t.x)
                signs = 1.0 - 2.0 * (
                    np.bitwise_count(cols & np.uint64(t.z)) & np.uint8(1)
                )
                phase = _PHASES[(t.z & t.x).bit_count() & 3]
                blocks.append(
                    sp.csr_matrix(
                        (t.coefficient * phase * signs, (rows.astype(np.int64), cols.astype(np.int64))),
                        shape=(dim, dim),
                    )
                )
            if not blocks:
                return sp.csr_matrix((dim, dim), dtype=np.complex128)
            out = blocks[0]
            for b in blocks[1:]:
                out = out + b
            return out
        if self.width > dense_cap:
            raise DeskScaleError(f"dense cap is {dense_cap} qubits")
        dim = 1 << self.width
        out = np.zeros((dim, dim), dtype=np.complex128)
        for t in self.terms:
            out += t.matrix()
        return out

    # --------------------------------------------------------- serialization
    def to_lines(self) -> str:
        """Line-oriented text, one term per line: '<re> <im> <letters>'."""
        return "\n".join(
            f"{t.coefficient.real!r} {t.coefficient.imag!r} {t.letters}"
            for t in self.terms
        )

    @classmethod
    def from_lines(cls, text: str, width: int | None = None) -> "OperatorSum":
        terms = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            re_s, im_s, letters = line.split()
            terms.append(PauliTerm.from_letters(float(re_s) + 1j * float(im_s), letters))
        if not terms and width is None:
            raise ValueError("width required to parse an empty operator")
        return cls(terms, width if width is not None else terms[0].width)

    def __repr__(self) -> str:
        inner = " + ".join(f"({t.coefficient:.3g})·{t.letters}" for t in self.terms[:4])
        more = "" if len(self.terms) <= 4 else f" … ({len(self.terms)} terms)"
        return f"OperatorSum[{inner}{more}]"


def from_matrix(mat: np.ndarray, tol: float = 1e-14) -> OperatorSum:
    """Exact Pauli-basis expansion of a dense matrix (small registers only)."""
    dim = mat.shape[0]
    width = int(dim - 1).bit_length()
    if (1 << width) != dim or mat.shape != (dim, dim):
        raise ValueError("matrix must be square with power-of-two size")
    if width > 12:
        raise DeskScaleError("Pauli decomposition is exponential; cap is 12 qubits")
    terms = []
    for z in range(1 << width):
        for x in range(1 << width):
            probe = PauliTerm(1.0, z, x, width)
            coeff = np.trace(probe.matrix().conj().T @ mat) / dim
            if abs(coeff) > tol:
                terms.append(PauliTerm(complex(coeff), z, x, width))
    return OperatorSum(terms, width)


def one_norm(entries) -> float:
    """Sum of |coefficient| over (coefficient, unitary) pairs or an LCU object."""
    if hasattr(entries, "one_norm"):
        return entries.one_norm()
    return float(sum(abs(c) for c, _ in entries))


@dataclass(frozen=True)
class LcuDecomposition:
    """Linear combination of unitaries: entries (coefficient, unitary).

    Unitaries may be OperatorSum objects or structured factorized unitaries;
    the container only guarantees the 1-norm bookkeeping.  Concatenation adds
    entry lists, so one-norms are additive by construction.
    """

    entries: tuple
    dimension_power: float = 0.0  # C carries units 1/a**dimension_power

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def one_norm(self) -> float:
        return float(sum(abs(c) for c, _ in self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def concat(self, other: "LcuDecomposition") -> "LcuDecomposition":
        if self.dimension_power != other.dimension_power:
            raise ValueError("cannot concatenate LCUs of different mass dimension")
        return LcuDecomposition(self.entries + other.entries, self.dimension_power)

    def scaled(self, factor: complex) -> "LcuDecomposition":
        return LcuDecomposition(
            tuple((factor * c, u) for c, u in self.entries), self.dimension_power
        )

    def check_unitaries(
        self, materializer: Callable = None, tol: float = 1e-10
    ) -> bool:
        """Desk-scale check that every listed operator is unitary."""
        for _, op in self.entries:
            mat = materializer(op) if materializer is not None else op.materialize()
            gram = mat.conj().T @ mat
            if not np.allclose(gram, np.eye(gram.shape[0]), atol=tol):
                return False
        return True


def nested_commutator_norm(
    h_local: OperatorSum,
    o: OperatorSum,
    dense_cap: int = None,
    max_iter: int = 2000,
    tol: float = 1e-10,
    seed: int = 7,
) -> float:
    """Spectral norm of [h, [h, o]].

    The double commutator is formed exactly in the Pauli algebra; the norm is
    a dense 2-norm at desk scale and a power iteration on A†A above it.
    """
    if h_local.width != o.width:
        raise WidthMismatchError("operators must share a width")
    nested = h_local.commutator(h_local.commutator(o))
    if not nested.terms:
        return 0.0
    dense_cap = DENSE_QUBIT_CAP if dense_cap is None else dense_cap
    if nested.width <= dense_cap:
        return float(np.linalg.norm(nested.materialize(), ord=2))
    rng = np.random.default_rng(seed)
    dim = 1 << nested.width
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    adj = nested.adjoint()
    prev = 0.0
    for _ in range(max_iter):
        nxt = adj.apply_array(nested.apply_array(vec))
        sigma_sq = float(np.linalg.norm(nxt))
        if sigma_sq == 0.0:
            return 0.0
        vec = nxt / sigma_sq
        if abs(np.sqrt(sigma_sq) - prev) < tol * max(1.0, prev):
            return float(np.sqrt(sigma_sq))
        prev = float(np.sqrt(sigma_sq))
    raise RuntimeError(f"power iteration did not converge in {max_iter} iterations")
