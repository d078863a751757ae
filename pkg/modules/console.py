import sys


# Color codes for better terminal output
class Colors:
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    RED = '\033[91m'
    BLUE = '\033[94m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def print_colored(text: str, color: str = "", file=None):
    """Print text with color for better readability (stderr by default, stdout carries results)"""
    stream = file if file is not None else sys.stderr
    if color:
        print(f"{color}{text}{Colors.ENDC}", file=stream)
    else:
        print(text, file=stream)


def run_test_functions(namespace: dict) -> int:
    """Run every test_* function in a module namespace, printing ✓/✗ per test; returns an exit code"""
    failures = 0
    tests = [(name, fn) for name, fn in namespace.items() if name.startswith('test_') and callable(fn)]
    for name, fn in tests:
        try:
            fn()
            print_colored(f"✓ {name}", Colors.GREEN, file=sys.stdout)
        except Exception as e:
            failures += 1
            print_colored(f"✗ {name}: {type(e).__name__}: {e}", Colors.RED, file=sys.stdout)
    summary = f"{len(tests) - failures}/{len(tests)} tests passed"
    print_colored(summary, Colors.GREEN if failures == 0 else Colors.RED, file=sys.stdout)
    return 1 if failures else 0
