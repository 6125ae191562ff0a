"""Collects one verdict line per acceptance criterion for the end-of-run summary."""

RESULTS: dict[int, str] = {}


def record(number: int, title: str, failures: list[str], detail: str = "") -> None:
    verdict = "PASS" if not failures else "FAIL"
    extra = f" ({detail})" if detail else ""
    if failures:
        extra += f" first failures: {failures[:3]}"
    RESULTS[number] = f"{verdict} criterion {number}: {title}{extra}"
    print(RESULTS[number])
