import pytest

from qaff import create_app


@pytest.fixture
def app():
    return create_app('testing')


@pytest.fixture
def runner(app):
    return app.test_cli_runner()
