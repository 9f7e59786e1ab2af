import json

from click.testing import CliRunner

from miracells import bimodule, cache
from miracells.cli import main
from miracells.laurent_hecke import ONE, V


def test_round_trip_is_byte_identical():
    for n in (2, 3):
        table = bimodule.kl_basis_R(n)
        text = cache.dump_table("kl_R", n, table)
        kind, m, parsed = cache.parse_table(text)
        assert (kind, m) == ("kl_R", n)
        assert parsed == table
        assert cache.dump_table(kind, m, parsed) == text


def test_store_and_reload(tmp_path, monkeypatch):
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    table = cache.kl_table(3, tmp_path)
    path = cache.table_path(tmp_path, "kl_R", 3)
    assert path.exists()
    assert cache.load_kl_table(3, tmp_path) == table


def test_env_var_overrides_flag(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv(cache.ENV_VAR, str(env_dir))
    assert cache.resolve_dir(tmp_path / "flag") == env_dir
    cache.kl_table(2, tmp_path / "flag")
    assert cache.table_path(env_dir, "kl_R", 2).exists()
    assert not (tmp_path / "flag").exists()


def test_stale_or_corrupt_files_are_ignored(tmp_path, monkeypatch):
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    table = bimodule.kl_basis_R(2)
    path = cache.table_path(tmp_path, "kl_R", 2)
    doc = json.loads(cache.dump_table("kl_R", 2, table))
    # a wrong coefficient on every element breaks bar invariance wherever the sample lands
    bad = {tw: {**exp, tw: ONE + V} for tw, exp in table.items()}
    path.write_text(cache.dump_table("kl_R", 2, bad))
    assert cache.load_kl_table(2, tmp_path) is None
    path.write_text("{not json")
    assert cache.load_kl_table(2, tmp_path) is None
    doc["n"] = 3
    path.write_text(json.dumps(doc))
    assert cache.load_kl_table(2, tmp_path) is None
    other = tmp_path / "kl_R-n2-v0.0.0-000000000000.json"
    other.write_text(cache.dump_table("kl_R", 2, table))
    assert cache.table_path(tmp_path, "kl_R", 2) != other


def test_cold_and_warm_runs_agree(tmp_path, monkeypatch):
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    runner = CliRunner()
    args = ["--cache-dir", str(tmp_path), "verify", "bimodule", "--n", "3"]
    cold = runner.invoke(main, args)
    assert list(tmp_path.iterdir())
    warm = runner.invoke(main, args)
    assert cold.exit_code == warm.exit_code == 0
    assert cold.output == warm.output
    r1 = runner.invoke(main, ["--cache-dir", str(tmp_path), "report", "--n", "3"])
    r2 = runner.invoke(main, ["report", "--n", "3"])
    assert r1.output == r2.output
