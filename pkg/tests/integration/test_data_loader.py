"""
Tests for the catalog data files, their checksums and the runtime configuration
"""

import os
import shutil
import sys
from pathlib import Path

import orjson
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from shimura.data_loader import CatalogDataLoader, MANIFEST_FILE, file_digest
from shimura.shared.config import LogFormat, ShimuraConfig, get_config
from shimura.shared.env_loader import PROJECT_ROOT, get_env_bool, get_env_int, get_env_var
from shimura.shared.errors import CorruptData

DATA_DIR = PROJECT_ROOT / "data"


@pytest.fixture(scope="session")
def loader():
    """Loader over the shipped data directory"""
    return CatalogDataLoader(DATA_DIR)


@pytest.fixture
def data_copy(tmp_path: Path) -> Path:
    """A private copy of the data directory that tests may damage"""
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    return target


def write_json(path: Path, payload) -> None:
    path.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2))


class TestCatalogDataLoader:
    """Loading and validating the shipped data"""

    def test_loads_every_dataset(self, loader):
        data = loader.load_data_from_files()
        assert set(data) == set(CatalogDataLoader.data_files)
        assert len(data["table1"].rows) == 11
        assert len(data["table2"].rows) == 17

    def test_manifest_matches_files_on_disk(self, loader):
        manifest = loader.manifest()
        assert manifest.algorithm == "sha256"
        assert manifest.files == loader.build_manifest()["files"]

    def test_unknown_dataset(self, loader):
        with pytest.raises(KeyError):
            loader.get_data("table4")

    def test_get_data_is_cached(self, loader):
        assert loader.get_data("errata") is loader.get_data("errata")


class TestCorruptData:
    """Every way a data directory can be broken ends in CorruptData"""

    def test_checksum_mismatch(self, data_copy):
        path = data_copy / "table1.json"
        path.write_bytes(path.read_bytes() + b"\n")
        with pytest.raises(CorruptData, match="checksum"):
            CatalogDataLoader(data_copy).get_data("table1")

    def test_checksums_can_be_skipped(self, data_copy):
        path = data_copy / "table1.json"
        path.write_bytes(path.read_bytes() + b"\n")
        assert len(CatalogDataLoader(data_copy, verify_checksums=False).get_data("table1").rows) == 11

    def test_missing_file(self, data_copy):
        (data_copy / "kurihara.json").unlink()
        with pytest.raises(CorruptData, match="not found"):
            CatalogDataLoader(data_copy).load_data_from_files()

    def test_missing_manifest(self, data_copy):
        (data_copy / MANIFEST_FILE).unlink()
        with pytest.raises(CorruptData):
            CatalogDataLoader(data_copy).get_data("table2")

    def test_schema_violation(self, data_copy):
        """A row with an unknown field fails validation even with a matching digest"""
        path = data_copy / "elliptic_quotients.json"
        payload = orjson.loads(path.read_bytes())
        payload["rows"][0]["conductor"] = 35
        write_json(path, payload)
        manifest = orjson.loads((data_copy / MANIFEST_FILE).read_bytes())
        manifest["files"]["elliptic_quotients.json"] = file_digest(path.read_bytes())
        write_json(data_copy / MANIFEST_FILE, manifest)
        with pytest.raises(CorruptData, match="failed validation"):
            CatalogDataLoader(data_copy).get_data("elliptic_quotients")

    def test_invalid_json(self, data_copy):
        (data_copy / "method2.json").write_bytes(b"{not json")
        with pytest.raises(CorruptData, match="not valid JSON"):
            CatalogDataLoader(data_copy, verify_checksums=False).get_data("method2")


class TestConfiguration:
    """Environment-driven settings"""

    def test_defaults(self, monkeypatch):
        for key in list(os.environ):
            if key.startswith("SHIMURA_"):
                monkeypatch.delenv(key)
        config = ShimuraConfig.from_environment()
        assert config.data_dir == DATA_DIR
        assert config.trial_division_bound == 10**6
        assert config.log_format is LogFormat.JSON
        assert config.verify_checksums

    def test_overrides(self, monkeypatch):
        monkeypatch.setenv("SHIMURA_TRIAL_BOUND", "1e4")
        monkeypatch.setenv("SHIMURA_LOG_FORMAT", "console")
        monkeypatch.setenv("SHIMURA_VERIFY_CHECKSUMS", "false")
        config = ShimuraConfig.from_environment()
        assert config.trial_division_bound == 10**4
        assert config.log_format is LogFormat.CONSOLE
        assert not config.verify_checksums
        assert config.to_dict()["log_format"] == "console"

    def test_rejects_nonsense(self, monkeypatch):
        monkeypatch.setenv("SHIMURA_TRIAL_BOUND", "1")
        with pytest.raises(ValueError):
            ShimuraConfig.from_environment()
        monkeypatch.setenv("SHIMURA_TRIAL_BOUND", "2.5")
        with pytest.raises(ValueError):
            ShimuraConfig.from_environment()

    def test_env_helpers(self, monkeypatch):
        monkeypatch.setenv("SHIMURA_TEST_FLAG", "yes")
        monkeypatch.delenv("SHIMURA_TEST_MISSING", raising=False)
        assert get_env_bool("SHIMURA_TEST_FLAG", False)
        assert get_env_int("SHIMURA_TEST_MISSING", 7) == 7
        with pytest.raises(ValueError):
            get_env_var("SHIMURA_TEST_MISSING", required=True)

    def test_singleton(self):
        assert get_config() is get_config()
