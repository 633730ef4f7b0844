import json

import numpy as np
import pytest

from crossdm import serialize
from crossdm.config import ConfigError, RunConfig, example_config_doc, load_config


class TestBankFile:
    def test_bit_exact_round_trip(self, demo_bank, tmp_path):
        path = tmp_path / "bank.json"
        serialize.save_bank(demo_bank, path)
        back = serialize.load_bank(path)
        assert back.weights.tobytes() == demo_bank.weights.tobytes()
        assert back.objective_values.tobytes() == demo_bank.objective_values.tobytes()
        assert back.spec == demo_bank.spec
        assert back.seed == demo_bank.seed

    def test_document_layout(self, demo_bank):
        doc = json.loads(serialize.dumps(serialize.bank_to_dict(demo_bank), indent=1))
        assert set(doc) == {"format", "spec", "seed", "weights", "objective_values",
                            "constraint_residuals"}
        assert len(doc["weights"]) == 16
        assert len(doc["weights"][0]) == 38
        w0 = demo_bank.weights[0]
        assert doc["weights"][0][20] == [w0[20].real, w0[20].imag]

    def test_seventeen_digits(self):
        assert serialize.dumps(0.1) == "0.10000000000000001"
        assert serialize.dumps(2.0) == "2.0"
        assert serialize.dumps(1e300) == "1.0000000000000001e+300"

    @pytest.mark.parametrize("x", [0.1, 1 / 3, np.pi, 5e-324, 1.7976931348623157e308, -0.0])
    def test_float_round_trip(self, x):
        assert float(json.loads(serialize.dumps(x))) == x

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            serialize.dumps(float("nan"))

    def test_rejects_wrong_format(self):
        with pytest.raises(ValueError):
            serialize.bank_from_dict({"format": "other"})

    def test_rejects_shape_mismatch(self, demo_bank):
        doc = serialize.bank_to_dict(demo_bank)
        doc["weights"] = doc["weights"][:3]
        with pytest.raises(ValueError, match="shape"):
            serialize.bank_from_dict(doc)


class TestConfig:
    def test_example_matches_design(self, demo_spec):
        cfg = RunConfig.from_dict(example_config_doc())
        assert cfg.design == demo_spec
        assert cfg.sweep_step == 1.0

    def test_round_trip_preserves_fields(self, tmp_path):
        doc = example_config_doc()
        doc["output"] = {"bank": "b.json"}
        path = tmp_path / "c.json"
        path.write_text(json.dumps(doc, indent=2))
        cfg = load_config(path)
        assert cfg.to_dict() == doc
        again = tmp_path / "again.json"
        again.write_text(cfg.dumps())
        assert load_config(again).to_dict() == doc
        assert cfg.output_path("bank") == "b.json"

    def test_explicit_positions_and_override(self):
        doc = example_config_doc()
        doc["array"] = {"positions": [0, 0.5, 1.25]}
        assert RunConfig.from_dict(doc).design.num_elements == 3
        doc["array"] = {"aperture_wavelengths": 9, "spacing_wavelengths": 0.5,
                        "num_elements": 8}
        assert RunConfig.from_dict(doc).design.num_elements == 8

    def test_overlap_error_is_line_anchored(self, tmp_path):
        doc = example_config_doc()
        doc["mainlobe"] = {"directions": [[10.0, -90.0]]}
        path = tmp_path / "bad.json"
        text = json.dumps(doc, indent=2)
        path.write_text(text)
        with pytest.raises(ConfigError) as info:
            load_config(path)
        line = [i + 1 for i, ln in enumerate(text.splitlines()) if '"sidelobe"' in ln][0]
        assert info.value.line == line
        assert f"bad.json:{line}" in str(info.value)
        assert "overlap" in str(info.value)

    @pytest.mark.parametrize("mutate,field", [
        (lambda d: d.update(modulation_order="four"), "modulation_order"),
        (lambda d: d.update(sidelobe_magnitude=-1), "sidelobe_magnitude"),
        (lambda d: d["polarisations"]["signal2"].update(gamma_deg=120),
         "polarisations.signal2"),
        (lambda d: d.update(bogus=1), "bogus"),
        (lambda d: d.pop("mainlobe"), "mainlobe"),
        (lambda d: d.update(sweep_step_deg=0), "sweep_step_deg"),
        (lambda d: d.update(array={"spacing_wavelengths": 0.5}), "array"),
    ])
    def test_field_errors(self, mutate, field):
        doc = example_config_doc()
        mutate(doc)
        with pytest.raises(ConfigError) as info:
            RunConfig.from_dict(doc, json.dumps(doc, indent=2))
        assert info.value.field == field
        if field != "mainlobe":
            assert info.value.line is not None

    def test_invalid_json_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "array": {\n  oops\n}')
        with pytest.raises(ConfigError) as info:
            load_config(path)
        assert info.value.line == 3
