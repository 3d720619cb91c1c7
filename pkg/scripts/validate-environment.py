#!/usr/bin/env python3
"""
Local environment check: interpreter, dependencies, configuration and the
catalog data directory. With --write-manifest the checksum manifest is
regenerated from the data files on disk.
"""

import argparse
import os
import sys
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))


class Colors:
    RED = '\033[0;31m'
    GREEN = '\033[0;32m'
    YELLOW = '\033[1;33m'
    BLUE = '\033[0;34m'
    NC = '\033[0m'


def print_status(message: str, status: str = "info"):
    if status == "success":
        color, prefix = Colors.GREEN, "ok"
    elif status == "error":
        color, prefix = Colors.RED, "error"
    elif status == "warning":
        color, prefix = Colors.YELLOW, "warn"
    else:
        color, prefix = Colors.BLUE, "..."
    print(f"{color}{prefix} {message}{Colors.NC}")


def check_virtual_environment() -> bool:
    """A virtualenv is recommended, not required"""
    print_status("Checking Python virtual environment...")
    if sys.version_info < (3, 10):
        print_status(f"Python 3.10+ required, running {sys.version.split()[0]}", "error")
        return False
    if not os.environ.get('VIRTUAL_ENV'):
        print_status("No virtual environment active", "warning")
    else:
        print_status(f"Virtual environment active: {os.environ['VIRTUAL_ENV']}", "success")
    return True


def check_python_dependencies() -> bool:
    print_status("Checking Python dependencies...")
    required_packages = ['pydantic', 'orjson', 'dotenv', 'structlog', 'sympy', 'pytest']
    missing_packages = []
    for package in required_packages:
        try:
            __import__(package)
            print_status(f"  - {package}: OK", "success")
        except ImportError:
            print_status(f"  - {package}: MISSING", "error")
            missing_packages.append(package)

    if missing_packages:
        print_status(f"Missing packages: {', '.join(missing_packages)}", "error")
        print("Run: pip install -r requirements.txt")
        return False
    return True


def check_configuration() -> bool:
    print_status("Loading configuration...")
    from shimura.shared.config import get_config

    config = get_config()
    for key, value in config.to_dict().items():
        print_status(f"  - {key}: {value}", "success")
    if not config.data_dir.is_dir():
        print_status(f"Data directory missing: {config.data_dir}", "error")
        return False
    return True


def check_catalog_data() -> bool:
    """Every data file matches the manifest and its schema"""
    print_status("Validating catalog data...")
    from shimura.catalog import Catalog
    from shimura.data_loader import CatalogDataLoader

    loader = CatalogDataLoader(verify_checksums=True)
    catalog = Catalog(loader)
    print_status(f"  - {len(catalog.curves)} curves, {len(catalog.quotients)} quotients", "success")
    return True


def write_manifest() -> int:
    import orjson

    from shimura.data_loader import MANIFEST_FILE, CatalogDataLoader

    loader = CatalogDataLoader(verify_checksums=False)
    path = loader.data_dir / MANIFEST_FILE
    path.write_bytes(orjson.dumps(loader.build_manifest(), option=orjson.OPT_INDENT_2) + b"\n")
    print_status(f"Manifest written: {path}", "success")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--write-manifest", action="store_true", help="regenerate data/manifest.json")
    args = parser.parse_args()

    if args.write_manifest:
        return write_manifest()

    tests = [
        ("Python Environment", check_virtual_environment),
        ("Python Dependencies", check_python_dependencies),
        ("Configuration", check_configuration),
        ("Catalog Data", check_catalog_data),
    ]

    passed = 0
    failed = 0
    for test_name, test_func in tests:
        print(f"\n{'=' * 20} {test_name} {'=' * 20}")
        try:
            if test_func():
                passed += 1
            else:
                failed += 1
        except Exception as e:
            print_status(f"{test_name} crashed: {type(e).__name__}: {e}", "error")
            failed += 1
            if test_name == "Python Dependencies":
                break

    print("\n" + "=" * 60)
    print_status(f"passed: {passed}", "success")
    print_status(f"failed: {failed}", "error" if failed else "success")

    if failed == 0:
        print()
        print("Next steps:")
        print("  1. Test suite: python -m pytest tests/integration/ -v")
        print("  2. Full verification: python -m shimura verify")
        return 0
    print()
    print("Fixes:")
    print("  1. Install dependencies: pip install -r requirements.txt")
    print("  2. After editing data files: python scripts/validate-environment.py --write-manifest")
    return 1


if __name__ == "__main__":
    sys.exit(main())
