from hypothesis import settings

settings.register_profile("udwent", deadline=None, max_examples=60)
settings.load_profile("udwent")

ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
