# debug.py
"""
Debug script to exercise mini-minkowski layers individually
Run this to troubleshoot an installation
"""

import sys
import os
import tempfile
from pathlib import Path

# Add the current directory to the path
sys.path.append(os.getcwd())


def test_norms():
    """Test norm loading"""
    print("🔍 Testing Norms...")

    try:
        from app.norms import parse_norm_source

        for source in ["euclidean", "lp:inf", "regular:6", "polygon:unit_balls/square.yaml"]:
            norm = parse_norm_source(source)
            print(f"✅ {source}: {norm.label()} digest {norm.digest()}")

        print("🎉 Norm tests passed!\n")
        return True

    except Exception as e:
        print(f"❌ Norm test failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_orthogonality():
    """Test sine and the predicates"""
    print("🔍 Testing Orthogonality...")

    try:
        from app.norms import parse_norm_source
        from app.orthogonality import birkhoff_test, roberts_test, sine

        square = parse_norm_source("lp:inf")
        result = sine(square, (1, 1), (0, 1))
        print(f"✅ square s((1,1),(0,1)) = {result.value}")
        print(f"✅ square Birkhoff (1,0) -> (0,1): {birkhoff_test(square, (1, 0), (0, 1))}")
        print(f"✅ square Roberts (1,0), (0,1): {roberts_test(square, (1, 0), (0, 1))}")

        print("🎉 Orthogonality tests passed!\n")
        return True

    except Exception as e:
        print(f"❌ Orthogonality test failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_constants():
    """Test the estimators at a low resolution"""
    print("🔍 Testing Constants...")

    try:
        from app.constants import estimate_cB, estimate_cS
        from app.norms import parse_norm_source

        hexagon = parse_norm_source("regular:6")
        cb = estimate_cB(hexagon, 32, 16, deterministic=True)
        cs = estimate_cS(hexagon, 32, deterministic=True)
        print(f"✅ hexagon c_B ~ {cb.value:.6f}, c_S ~ {cs.value:.6f}")

        print("🎉 Constant tests passed!\n")
        return True

    except Exception as e:
        print(f"❌ Constant test failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_database():
    """Test ledger operations"""
    print("🔍 Testing Database...")

    try:
        from app.database import Database
        from app.models import RunStatus

        with tempfile.TemporaryDirectory() as tmp:
            db = Database(f"sqlite:///{tmp}/ledger.db")
            db.init_db()
            print("✅ Ledger initialized")

            run = db.create_run("norm-info", "lp:2", "0" * 16)
            print(f"✅ Created run: {run.id}")

            db.update_run(run.id, RunStatus.SUCCEEDED, ["Test log"], report={"ok": True})
            print(f"✅ Retrieved run status: {db.get_run(run.id).status.value}")

            print(f"✅ Listed {len(db.list_runs(10))} runs")
            db.engine.dispose()

        print("🎉 Database tests passed!\n")
        return True

    except Exception as e:
        print(f"❌ Database test failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def check_files():
    """Check if all required files exist"""
    print("🔍 Checking Project Structure...")

    required_files = [
        "app/__init__.py",
        "app/main.py",
        "app/models.py",
        "app/database.py",
        "app/runner.py",
        "app/geometry.py",
        "app/norms/__init__.py",
        "app/orthogonality.py",
        "app/bisector.py",
        "app/constants.py",
        "app/oracles.py",
        "app/figures.py",
        "app/commands/__init__.py",
        "unit_balls/square.yaml",
    ]

    missing_files = []
    for file_path in required_files:
        if not Path(file_path).exists():
            missing_files.append(file_path)
        else:
            print(f"✅ {file_path}")

    if missing_files:
        print(f"\n❌ Missing files:")
        for missing in missing_files:
            print(f"   - {missing}")
        return False

    print("🎉 All required files found!\n")
    return True


def main():
    print("🚀 mini-minkowski Debug Script")
    print("=" * 40)

    if not check_files():
        print("Please create the missing files before continuing.")
        return

    tests = [
        test_norms,
        test_orthogonality,
        test_constants,
        test_database,
    ]

    results = [test() for test in tests]

    print("📊 Test Summary:")
    passed = sum(results)
    total = len(results)
    print(f"   ✅ {passed}/{total} tests passed")

    if passed == total:
        print("\n🎉 All tests passed! Your installation is working correctly.")
        print("Try:")
        print("   poetry run mini-minkowski cb --norm lp:2 --resolution 512")
    else:
        print(f"\n❌ {total - passed} tests failed. Please check the errors above.")


if __name__ == "__main__":
    main()
