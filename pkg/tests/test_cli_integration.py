"""Integration tests for the serve command."""

from unittest.mock import patch

from slodowy.cli import main


def test_cli_module_importable() -> None:
    """Test CLI module can be imported."""
    from slodowy import cli

    assert hasattr(cli, "main")


def test_serve_stdio() -> None:
    with patch("slodowy.server.mcp.run") as mock_run:
        mock_run.side_effect = KeyboardInterrupt()
        assert main(["serve"]) == 0
        assert mock_run.call_args[1]["transport"] == "stdio"


def test_serve_http_custom_port() -> None:
    with patch("slodowy.server.mcp.run") as mock_run:
        mock_run.side_effect = KeyboardInterrupt()
        assert main(["serve", "--transport", "http", "--port", "8080"]) == 0
        call_kwargs = mock_run.call_args[1]
        assert call_kwargs["transport"] == "streamable-http"
        assert call_kwargs["port"] == 8080
        assert call_kwargs["log_level"] == "error"


def test_serve_http_host_from_environment(monkeypatch) -> None:  # type: ignore[no-untyped-def]
    monkeypatch.setenv("SLODOWY_HOST", "0.0.0.0")
    with patch("slodowy.server.mcp.run") as mock_run:
        mock_run.side_effect = KeyboardInterrupt()
        main(["serve", "--transport", "http"])
        assert mock_run.call_args[1]["host"] == "0.0.0.0"


def test_serve_debug_keeps_uvicorn_logging() -> None:
    with patch("slodowy.server.mcp.run") as mock_run:
        mock_run.side_effect = KeyboardInterrupt()
        main(["--log-level", "DEBUG", "serve", "--transport", "http"])
        call_kwargs = mock_run.call_args[1]
        assert call_kwargs["uvicorn_config"] is None
        assert call_kwargs["log_level"] == "debug"
