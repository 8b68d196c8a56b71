import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def tsv(tmp_path):
    """Write tab-separated rows to a temp file and return its path."""

    def write(name, rows, header=None):
        p = tmp_path / name
        with open(p, "w") as fh:
            if header:
                fh.write(header + "\n")
            for row in rows:
                fh.write("\t".join(str(x) for x in row) + "\n")
        return str(p)

    return write
