"""Content-addressed on-disk cache for orbit tables and submodule censuses.

Keys digest the canonical quiver form, the base field, the grading and a
format version, so equivalent input files share entries and stale
formats miss cleanly.  Writes go through a temp file and an atomic
rename; every payload carries its own checksum, and a mismatch is
logged and treated as a miss.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1

log = logging.getLogger("hallq.cache")


class ChecksumMismatch(Exception):
    pass


def quiver_digest(quiver, p: int, e: int) -> str:
    doc = {
        "vertices": list(quiver.vertices),
        "arrows": [[n, quiver.vertices[s], quiver.vertices[t]] for n, s, t in quiver.arrows],
        "aut_vertices": {v: quiver.vertices[quiver.aut_v[i]] for i, v in enumerate(quiver.vertices)},
        "aut_arrows": {
            a[0]: quiver.arrows[quiver.aut_h[i]][0] for i, a in enumerate(quiver.arrows)
        },
        "p": p,
        "e": e,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


class TableCache:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def _key(self, space, kind: str, **extra) -> str:
        doc = {
            "quiver": quiver_digest(space.quiver, space.field.p, space.field.e),
            "kind": kind,
            "format_version": FORMAT_VERSION,
            **extra,
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.npz"

    def _write(self, key: str, arrays: dict) -> None:
        buf = io.BytesIO()
        np.savez(buf, **arrays)
        payload = buf.getvalue()
        digest = hashlib.sha256(payload).digest()
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(digest)
                fh.write(payload)
            os.replace(tmp, self._path(key))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def _read(self, key: str) -> dict | None:
        path = self._path(key)
        if not path.exists():
            return None
        raw = path.read_bytes()
        digest, payload = raw[:32], raw[32:]
        if hashlib.sha256(payload).digest() != digest:
            log.warning("cache checksum mismatch for %s; recomputing", path.name)
            return None
        with np.load(io.BytesIO(payload)) as npz:
            return {k: npz[k] for k in npz.files}

    # -- orbit tables --

    def store_orbit_table(self, space, table) -> None:
        key = self._key(space, "orbits", dim=list(table.nu))
        self._write(
            key,
            {
                "orbit_of_code": table.orbit_of_code,
                "reps": table.reps,
                "sizes": table.sizes,
                "auts": np.array([str(a) for a in table.auts], dtype="U"),
            },
        )

    def load_orbit_table(self, space, nu):
        from hallq.repspace import OrbitTable

        key = self._key(space, "orbits", dim=list(nu))
        data = self._read(key)
        if data is None:
            return None
        return OrbitTable(
            nu=tuple(nu),
            orbit_of_code=data["orbit_of_code"],
            reps=data["reps"],
            sizes=data["sizes"],
            auts=tuple(int(a) for a in data["auts"]),
        )

    # -- submodule censuses --

    def store_census(self, space, L, nu_sub, counts: dict) -> None:
        key = self._key(space, "census", dim=list(L.dim), orbit=L.orbit, sub=list(nu_sub))
        items = sorted(counts.items())
        self._write(
            key,
            {
                "kq": np.array([k[0] for k, _ in items], np.int64),
                "kn": np.array([k[1] for k, _ in items], np.int64),
                "count": np.array([c for _, c in items], np.int64),
            },
        )

    def load_census(self, space, L, nu_sub) -> dict | None:
        key = self._key(space, "census", dim=list(L.dim), orbit=L.orbit, sub=list(nu_sub))
        data = self._read(key)
        if data is None:
            return None
        return {
            (int(a), int(b)): int(c)
            for a, b, c in zip(data["kq"], data["kn"], data["count"])
        }
