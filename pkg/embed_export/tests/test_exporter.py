import json

import numpy as np
import pytest

import hoihead  # the consumer toolkit; its reader is the compatibility oracle
from embed_export.cli import main
from embed_export.encoders import EncoderUnavailable, HashingEncoder, resolve_encoder
from embed_export.exporter import ExportConfig, export, read_prompts


@pytest.fixture
def prompts_file(tmp_path):
    path = tmp_path / "prompts.txt"
    path.write_text(
        "a person riding a bicycle\n"
        "a person eating an apple\n"
        "a person and an umbrella\n",
        encoding="utf-8",
    )
    return path


class TestReadPrompts:
    def test_order_preserved(self, prompts_file):
        lines = read_prompts(prompts_file)
        assert len(lines) == 3
        assert lines[0] == "a person riding a bicycle"

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        with pytest.raises(ValueError, match="empty"):
            read_prompts(empty)

    def test_blank_line_reported(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("a person riding a bicycle\n\nanother prompt\n")
        with pytest.raises(ValueError, match="line 2"):
            read_prompts(path)


class TestHashingEncoder:
    def test_deterministic(self):
        texts = ["a person riding a bicycle", "a person eating an apple"]
        a = HashingEncoder(64).encode(texts)
        b = HashingEncoder(64).encode(texts)
        np.testing.assert_array_equal(a, b)

    def test_shape(self):
        emb = HashingEncoder(32).encode(["one two", "three"])
        assert emb.shape == (2, 32)

    def test_name_resolution(self):
        assert resolve_encoder("hash").dim == 256
        assert resolve_encoder("hash:512").dim == 512

    def test_unavailable_encoder_names_itself(self):
        with pytest.raises(EncoderUnavailable, match="no-such-model-xyz"):
            resolve_encoder("no-such-model-xyz")


class TestExport:
    def test_rows_match_prompts_and_unit_norms(self, prompts_file, tmp_path):
        out = tmp_path / "emb.bin"
        meta = export(ExportConfig(str(prompts_file), "hash:128", str(out)))
        matrix, dtype = hoihead.read_matrix(out)  # must satisfy the consumer
        assert dtype == hoihead.DTYPE_F32
        assert matrix.shape == (3, 128)
        np.testing.assert_allclose(
            np.linalg.norm(matrix.astype(np.float64), axis=1), 1.0, atol=1e-5
        )
        assert meta["rows"] == 3

    def test_order_preserved(self, prompts_file, tmp_path):
        out_all = tmp_path / "all.bin"
        export(ExportConfig(str(prompts_file), "hash:64", str(out_all)))
        full, _ = hoihead.read_matrix(out_all)

        single = tmp_path / "single.txt"
        single.write_text("a person and an umbrella\n")
        out_one = tmp_path / "one.bin"
        export(ExportConfig(str(single), "hash:64", str(out_one)))
        one, _ = hoihead.read_matrix(out_one)
        np.testing.assert_array_equal(full[2], one[0])

    def test_no_normalize_keeps_raw_norms(self, prompts_file, tmp_path):
        out = tmp_path / "raw.bin"
        export(ExportConfig(str(prompts_file), "hash:64", str(out), normalize=False))
        matrix, _ = hoihead.read_matrix(out)
        norms = np.linalg.norm(matrix.astype(np.float64), axis=1)
        assert not np.allclose(norms, 1.0, atol=1e-3)

    def test_rerun_byte_identical(self, prompts_file, tmp_path):
        out_a, out_b = tmp_path / "a.bin", tmp_path / "b.bin"
        export(ExportConfig(str(prompts_file), "hash:96", str(out_a)))
        export(ExportConfig(str(prompts_file), "hash:96", str(out_b)))
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_sidecar_records_provenance(self, prompts_file, tmp_path):
        out = tmp_path / "emb.bin"
        export(ExportConfig(str(prompts_file), "hash:64", str(out)))
        meta = json.loads((tmp_path / "emb.bin.meta.json").read_text())
        assert meta["role"] == "embeddings"
        assert meta["encoder"] == "hash:64"
        assert meta["pooling"] == "token-sum"
        assert len(meta["prompts_sha256"]) == 64

    def test_full_scale_export(self, tmp_path):
        prompts = tmp_path / "big.txt"
        prompts.write_text(
            "\n".join(f"a person holding an item {i}" for i in range(600)) + "\n"
        )
        out = tmp_path / "big.bin"
        export(ExportConfig(str(prompts), "hash:512", str(out)))
        matrix, _ = hoihead.read_matrix(out)
        assert matrix.shape == (600, 512)

    def test_usable_as_training_init(self, tmp_path):
        # end to end through the consumer: exported embeddings drive training
        from hoihead.harness import TrainConfig, train
        from hoihead.labelspace import make_prompts, parse_class_list
        from hoihead.synth import make_separable

        classes_text = "\n".join(f"hold item_{i:03d}" for i in range(8)) + "\n"
        classes_path = tmp_path / "classes.txt"
        classes_path.write_text(classes_text)
        prompts_path = tmp_path / "prompts.txt"
        prompts_path.write_text(
            "\n".join(p.text for p in make_prompts(parse_class_list(classes_text))) + "\n"
        )
        out = tmp_path / "emb.bin"
        export(ExportConfig(str(prompts_path), "hash:16", str(out)))

        data = make_separable(n_images=128, C=8, D=16, seed=0)
        paths = data.write(tmp_path / "data")
        record = train(TrainConfig(
            features_path=paths["features"],
            labels_path=paths["labels"],
            classes_path=str(classes_path),
            out_dir=str(tmp_path / "run"),
            init="embeddings",
            embeddings_path=str(out),
            epochs=2,
        ))
        assert len(record.epoch_val_map) == 2


class TestCli:
    def test_export_command(self, prompts_file, tmp_path, capsys):
        rc = main([
            "--prompts", str(prompts_file),
            "--encoder", "hash:64",
            "--out", str(tmp_path / "emb.bin"),
        ])
        assert rc == 0
        meta = json.loads(capsys.readouterr().out)
        assert meta["cols"] == 64

    def test_no_normalize_flag(self, prompts_file, tmp_path, capsys):
        rc = main([
            "--prompts", str(prompts_file),
            "--encoder", "hash:64",
            "--out", str(tmp_path / "emb.bin"),
            "--no-normalize",
        ])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["normalize"] is False

    def test_missing_encoder_fails_cleanly(self, prompts_file, tmp_path, capsys):
        rc = main([
            "--prompts", str(prompts_file),
            "--encoder", "definitely-not-installed",
            "--out", str(tmp_path / "emb.bin"),
        ])
        assert rc == 1
        assert "definitely-not-installed" in capsys.readouterr().err
