"""Complete enumeration of a finite matrix group with indexed lookup.

Elements are stored as one (N, n, n) integer array.  A matrix is encoded as
a base-m integer key (n*n digits, which stays below 2**63 for m <= 9 and
n <= 4), and lookup is a binary search over the sorted key array, so batch
queries vectorize.  Conjugation by each elementary generator is cached as
an index permutation; subgroup and normal-closure computations in
lattice.py run entirely on indices.
"""

from __future__ import annotations

import numpy as np

from .errors import SizeCapError
from .models import SP4_FORM, GroupModel, order_formula

DEFAULT_CAP = 2_000_000
_SCAN_LIMIT = 400_000  # m**(n*n) bound for the brute-force predicate scan


class ElementTable:
    def __init__(self, model: GroupModel, cap: int = DEFAULT_CAP, cross_check: bool = True):
        self.model = model
        self.n = model.degree
        self.m = model.m
        expected = order_formula(model)
        if expected > cap:
            raise SizeCapError(expected, cap, model.name())

        self._powers = (self.m ** np.arange(self.n * self.n, dtype=np.int64))
        gen_mats = model.generator_mats()
        mats, index = self._bfs(gen_mats)
        if len(mats) != expected:
            raise RuntimeError(
                f"{model.name()}: enumerated {len(mats)} elements, order formula gives {expected}"
            )
        self.N = len(mats)
        self.mats = mats
        self._index = index
        keys = self.encode(mats)
        self._order = np.argsort(keys).astype(np.int64)
        self._keys_sorted = keys[self._order]
        keyspace = self.m ** (self.n * self.n)
        self._dense = None
        if keyspace <= 50_000_000:
            # direct-address lookup; 0 marks a non-element
            self._dense = np.zeros(keyspace, dtype=np.int32)
            self._dense[keys] = np.arange(self.N, dtype=np.int32) + 1
        self.identity_idx = int(self.lookup_one(model.identity()))
        self.gen_idxs = self.lookup(np.stack(gen_mats))
        self.inv = self._all_inverses()
        self._conj_perms: dict[int, np.ndarray] = {}
        if cross_check and self.m ** (self.n * self.n) <= _SCAN_LIMIT:
            scanned = self._predicate_scan()
            if not np.array_equal(np.sort(scanned), np.sort(keys)):
                raise RuntimeError(f"{model.name()}: BFS and predicate scan disagree")

    # -- construction ---------------------------------------------------------

    def encode(self, mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(-1, self.n * self.n).astype(np.int64)
        return flat @ self._powers

    def _bfs(self, gen_mats) -> tuple[np.ndarray, dict[int, int]]:
        n, m = self.n, self.m
        ident = np.eye(n, dtype=np.int64)
        mats_list = [ident]
        index = {int(self.encode(ident[None, :, :])[0]): 0}
        gens = np.stack([g % m for g in gen_mats]).astype(np.int64)
        frontier = ident[None, :, :]
        while len(frontier):
            prods = (frontier[:, None, :, :] @ gens[None, :, :, :]) % m
            prods = prods.reshape(-1, n, n)
            keys = self.encode(prods)
            new = []
            for k, mat in zip(keys.tolist(), prods):
                if k not in index:
                    index[k] = len(mats_list)
                    mats_list.append(mat)
                    new.append(mat)
            frontier = np.stack(new) if new else np.empty((0, n, n), dtype=np.int64)
        return np.stack(mats_list).astype(np.int16), index

    def _predicate_scan(self) -> np.ndarray:
        n, m = self.n, self.m
        total = m ** (n * n)
        nums = np.arange(total, dtype=np.int64)
        digits = np.empty((total, n * n), dtype=np.int64)
        for t in range(n * n):
            digits[:, t] = (nums // m**t) % m
        mats = digits.reshape(total, n, n)
        if self.model.kind == "SL":
            good = _batch_det(mats, m) == 1
        else:
            lhs = np.einsum("kji,jl,klo->kio", mats, SP4_FORM % m, mats) % m
            good = (lhs == SP4_FORM % m).all(axis=(1, 2))
        return nums[good]

    def _all_inverses(self) -> np.ndarray:
        mats = self.mats.astype(np.int64)
        if self.model.kind == "SL":
            inv_mats = _batch_adjugate(mats, self.m)  # det = 1
        else:
            F = SP4_FORM.astype(np.int64)
            inv_mats = np.einsum("ij,klj,lo->kio", -F, mats, F) % self.m
        idx = self.lookup(inv_mats)
        assert (idx >= 0).all()
        return idx.astype(np.int64)

    # -- lookup ---------------------------------------------------------------

    @property
    def powers(self) -> np.ndarray:
        return self._powers

    def lookup(self, mats: np.ndarray) -> np.ndarray:
        """Indices of a batch of matrices; -1 where not an element."""
        mats = np.asarray(mats, dtype=np.int64) % self.m
        return self.lookup_keys(self.encode(mats))

    def lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        if self._dense is not None:
            return self._dense[keys].astype(np.int64) - 1
        pos = np.searchsorted(self._keys_sorted, keys)
        pos_c = np.minimum(pos, self.N - 1)
        found = self._keys_sorted[pos_c] == keys
        return np.where(found, self._order[pos_c], -1)

    def lookup_one(self, mat: np.ndarray) -> int | None:
        r = int(self.lookup(np.asarray(mat)[None, :, :])[0])
        return None if r < 0 else r

    def mat(self, idx: int) -> np.ndarray:
        return self.mats[idx].astype(np.int64)

    # -- cached permutation actions -------------------------------------------

    def conj_perm(self, gen_idx: int) -> np.ndarray:
        """Index permutation of x -> g^-1 x g for a fixed generator g."""
        gen_idx = int(gen_idx)
        if gen_idx not in self._conj_perms:
            g = self.mat(gen_idx)
            ginv = self.mat(int(self.inv[gen_idx]))
            mats = self.mats.astype(np.int64)
            conj = np.einsum("ij,kjl,lo->kio", ginv, mats, g) % self.m
            perm = self.lookup(conj)
            assert (perm >= 0).all()
            self._conj_perms[gen_idx] = perm.astype(np.int64)
        return self._conj_perms[gen_idx]

    def egen_conj_perms(self) -> list[np.ndarray]:
        return [self.conj_perm(i) for i in self.gen_idxs.tolist()]


def _batch_det(mats: np.ndarray, m: int) -> np.ndarray:
    n = mats.shape[1]
    a = mats.astype(np.int64)
    if n == 2:
        d = a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
    elif n == 3:
        d = (
            a[:, 0, 0] * (a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1])
            - a[:, 0, 1] * (a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0])
            + a[:, 0, 2] * (a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0])
        )
    elif n == 4:
        d = np.zeros(len(a), dtype=np.int64)
        cols = [0, 1, 2, 3]
        for j in range(4):
            rest = [c for c in cols if c != j]
            minor = a[:, 1:, :][:, :, rest]
            d += (-1) ** j * a[:, 0, j] * _batch_det(minor, m)
        d %= m
        return d
    else:
        raise NotImplementedError(n)
    return d % m


def _batch_adjugate(mats: np.ndarray, m: int) -> np.ndarray:
    n = mats.shape[1]
    a = mats.astype(np.int64)
    adj = np.zeros_like(a)
    rows = list(range(n))
    for i in range(n):
        for j in range(n):
            rr = [r for r in rows if r != i]
            cc = [c for c in rows if c != j]
            minor = a[:, rr, :][:, :, cc]
            adj[:, j, i] = (-1) ** (i + j) * (
                _batch_det(minor, m) if n > 2 else minor[:, 0, 0]
            )
    return adj % m
