#!/usr/bin/env python3
"""Write demo-session.json (the create_session payload for index.html)
from the synthetic benchmark dataset."""

import json
from pathlib import Path

from tulca import SyntheticSpec, generate_synthetic

ds = generate_synthetic(SyntheticSpec(seed=0))
payload = {
    "shape": list(ds.tensor.shape),
    "values": ds.tensor.values.ravel().tolist(),
    "labels": ds.labels.tolist(),
    "mode_names": list(ds.tensor.mode_names),
    "group_names": list(ds.group_names),
    "core_shape": [2, 3],
    "preset": "tda",
}
out = Path(__file__).parent / "demo-session.json"
out.write_text(json.dumps(payload))
print(f"wrote {out}")
