"""Artifact container round trips and corruption detection."""

from __future__ import annotations

import json

import pytest

from maclfr.errors import IntegrityError
from maclfr.schemes import SchemeConfig, SchemeKind, simulate
from maclfr.topology import TopologySpec
from maclfr.transcript import (MAGIC, SimulationArtifact, artifact_from_bytes,
                               artifact_to_bytes, simulation_to_bytes,
                               simulation_to_json)


def result_for(kind: SchemeKind, broadcast: bool = False):
    cfg = SchemeConfig(TopologySpec(3, 2, 1), 3, 6, kind, seed=4,
                       broadcast=broadcast)
    if broadcast:
        cfg = SchemeConfig(TopologySpec(3, 2, 0), 3, 6, kind, seed=4,
                           broadcast=True)
    return simulate(cfg)


@pytest.mark.parametrize("kind", tuple(SchemeKind))
def test_binary_round_trip(kind):
    result = result_for(kind)
    blob = simulation_to_bytes(result)
    artifact = artifact_from_bytes(blob)
    assert artifact.cfg == result.cfg
    assert artifact.caches == result.placement.caches
    assert artifact.transcript == result.transcript
    # Re-serializing the parsed artifact reproduces the bytes.
    again = artifact_to_bytes(artifact.cfg, artifact.caches,
                              artifact.transcript)
    assert again == blob


def test_broadcast_round_trip():
    result = result_for(SchemeKind.P_LFR, broadcast=True)
    artifact = artifact_from_bytes(simulation_to_bytes(result))
    assert artifact.transcript.broadcast_files == result.library.files
    assert artifact.transcript.rate == result.transcript.rate


def test_serialization_is_deterministic():
    a = simulation_to_bytes(result_for(SchemeKind.SP_LFR))
    b = simulation_to_bytes(result_for(SchemeKind.SP_LFR))
    assert a == b
    assert (simulation_to_json(result_for(SchemeKind.SP_LFR))
            == simulation_to_json(result_for(SchemeKind.SP_LFR)))


def test_json_document_shape():
    result = result_for(SchemeKind.IS_LFR)
    doc = json.loads(simulation_to_json(result))
    assert doc["format"] == "maclfr-artifact"
    assert doc["config"]["scheme"] == "is-lfr"
    assert doc["config"]["C"] == 3
    assert len(doc["caches"]) == 3
    assert doc["delivery"]["rate"] == "1/3"
    payloads = doc["delivery"]["payloads"]
    assert len(payloads) == result.cfg.topo.num_transmissions
    assert all(set(p) == {"S", "bits", "hex"} for p in payloads)
    # Coded key blocks appear only on this kind; shares and whole keys not.
    assert all(c["coded_subkeys"] for c in doc["caches"])
    assert all(not c["key_shares"] and not c["whole_keys"]
               for c in doc["caches"])


def test_corruption_is_detected():
    blob = simulation_to_bytes(result_for(SchemeKind.S_LFR))
    with pytest.raises(IntegrityError):
        artifact_from_bytes(b"XXXX" + blob[4:])
    with pytest.raises(IntegrityError):
        artifact_from_bytes(blob[:4] + b"\xff\xff" + blob[6:])  # bad version
    with pytest.raises(IntegrityError):
        artifact_from_bytes(blob[:-3])  # truncation
    with pytest.raises(IntegrityError):
        artifact_from_bytes(blob + b"\x00")  # trailing garbage
    bad_kind = blob[:6] + bytes([250]) + blob[7:]
    with pytest.raises(IntegrityError):
        artifact_from_bytes(bad_kind)


def test_artifact_type_is_reusable():
    result = result_for(SchemeKind.LFR)
    artifact = SimulationArtifact(result.cfg, result.placement.caches,
                                  result.transcript)
    blob = artifact_to_bytes(artifact.cfg, artifact.caches,
                             artifact.transcript)
    assert blob.startswith(MAGIC)
    assert artifact_from_bytes(blob) == artifact
