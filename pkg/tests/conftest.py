import pytest

from prioranging import TABLE1


@pytest.fixture
def table1():
    return TABLE1


def micro_config(**kw):
    """Tiny single-opportunity instance; all stations LP unless overridden."""
    base = dict(total_stations=2, arrival_prob=1.0, hp_fraction=0.0, opportunities_per_frame=1,
                n_codes=2, alpha=0.0, rssw_start_hp=1, rssw_start_lp=1, rssw_end=2,
                frame_duration_ms=5.0, t3_ms=5.0, beta=2, n_frames=3, seed=1)
    base.update(kw)
    return TABLE1.replace(**base)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def add(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
