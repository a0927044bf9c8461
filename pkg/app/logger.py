"""
JSON file logging utility
"""
import json
import sys
from datetime import datetime
from typing import Dict, Any, Optional

from app.config import LOG_DIR, LOG_FILE, REPORT_LOG_FILE, CONSOLE_LOG_LEVEL

_LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40}


def ensure_log_dir():
    """Ensure log directory exists"""
    LOG_DIR.mkdir(exist_ok=True)


def log_to_json(
    level: str,
    message: str,
    context: Optional[Dict[str, Any]] = None,
    error: Optional[str] = None
):
    """
    Write log entry to JSON file and echo it to stderr

    Args:
        level: Log level (INFO, ERROR, WARNING, DEBUG)
        message: Log message
        context: Additional context data (dict)
        error: Error message if applicable
    """
    ensure_log_dir()

    timestamp = datetime.now().isoformat()
    log_entry = {
        "timestamp": timestamp,
        "level": level,
        "message": message
    }

    if context:
        log_entry["context"] = context

    if error:
        log_entry["error"] = error

    # stdout carries reports, so the console echo goes to stderr
    if _LEVELS.get(level, 0) >= _LEVELS[CONSOLE_LOG_LEVEL]:
        print(f"[{timestamp}] [{level}] {message}", file=sys.stderr)
        if context:
            print(f"Context: {json.dumps(context, ensure_ascii=False, default=str)}", file=sys.stderr)
        if error:
            print(f"Error: {error}", file=sys.stderr)

    # Append to JSON file (one JSON object per line - JSONL format)
    try:
        with open(LOG_FILE, "a", encoding="utf-8") as f:
            f.write(json.dumps(log_entry, ensure_ascii=False, default=str) + "\n")
    except Exception as e:
        # Fallback to stderr if file write fails
        print(f"ERROR: Failed to write log: {e}", file=sys.stderr)
        print(f"Log entry: {log_entry}", file=sys.stderr)


def log_info(message: str, context: Optional[Dict[str, Any]] = None):
    """Log info message"""
    log_to_json("INFO", message, context)


def log_error(message: str, error: Optional[str] = None, context: Optional[Dict[str, Any]] = None):
    """Log error message"""
    log_to_json("ERROR", message, context, error)


def log_warning(message: str, context: Optional[Dict[str, Any]] = None):
    """Log warning message"""
    log_to_json("WARNING", message, context)


def log_debug(message: str, context: Optional[Dict[str, Any]] = None):
    """Log debug message"""
    log_to_json("DEBUG", message, context)


def log_pipeline_step(stage: str, context: Optional[Dict[str, Any]] = None, error: Optional[str] = None):
    """Log the outcome of one pipeline stage (V+, double dual, R, ...)"""
    if error:
        log_error(f"Pipeline stage failed: {stage}", error, context)
    else:
        log_info(f"Pipeline stage completed: {stage}", context)


def save_report(report: Dict[str, Any], target: Optional[str] = None):
    """
    Append an emitted report to the report log

    Args:
        report: The report document as a dict
        target: Catalog name or file path the report was computed for
    """
    ensure_log_dir()

    entry = {
        "timestamp": datetime.now().isoformat(),
        "target": target,
        "report": report
    }

    try:
        with open(REPORT_LOG_FILE, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False, default=str) + "\n")
    except Exception as e:
        print(f"ERROR: Failed to save report: {e}", file=sys.stderr)
