#!/usr/bin/env python3
"""Test model: uniform probabilities over N classes (argv[1], default 3)."""
import json
import sys

classes = int(sys.argv[1]) if len(sys.argv) > 1 else 3
print(json.dumps({"classes": classes}), flush=True)
for line in sys.stdin:
    req = json.loads(line)
    probs = [[1.0 / classes] * classes for _ in req["instances"]]
    print(json.dumps({"id": req["id"], "probabilities": probs}), flush=True)
