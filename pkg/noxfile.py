import nox

@nox.session
def tests(session: nox.Session) -> None:
    session.install("pytest", "coverage")
    session.install(".")
    session.run("coverage", "run", "-m", "pytest", "-m", "not slow", *session.posargs)
    session.run("coverage", "report", "--include=*stdg_VEM*")


@nox.session
def acceptance(session: nox.Session) -> None:
    session.install("pytest")
    session.install(".")
    session.run("pytest", "-m", "slow", *session.posargs)
