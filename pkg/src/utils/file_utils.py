"""
File utility functions for rulebase and scenario discovery.
"""

import logging
import os
from pathlib import Path
from typing import List, Sequence

from src.config import RULES_EXTENSION, SCENARIO_EXTENSION
from src.core.errors import InputError

logger = logging.getLogger(__name__)


def get_file_extension(file_path: str | Path) -> str:
    """
    Get the extension of a file.

    Args:
        file_path: Path to the file

    Returns:
        File extension with leading dot (e.g., '.scn')
    """
    if isinstance(file_path, Path):
        return file_path.suffix
    return os.path.splitext(file_path)[1]


def find_files(directory: str | Path, extension: str, recursive: bool = True) -> List[Path]:
    """
    Find files with an extension under a directory.

    Args:
        directory: Directory to search
        extension: Extension with leading dot
        recursive: Whether to search subdirectories

    Returns:
        Matching paths in sorted order (empty when the directory is missing)
    """
    directory = Path(directory)
    if not directory.is_dir():
        logger.error("Directory '%s' does not exist", directory)
        return []

    found = []
    if recursive:
        for root, _, files in os.walk(directory):
            for filename in files:
                file_path = Path(root) / filename
                if get_file_extension(file_path).lower() == extension:
                    found.append(file_path)
    else:
        for item in directory.iterdir():
            if item.is_file() and get_file_extension(item).lower() == extension:
                found.append(item)
    return sorted(found)


def find_scenario_files(directory: str | Path, recursive: bool = True) -> List[Path]:
    return find_files(directory, SCENARIO_EXTENSION, recursive)


def find_rules_files(directory: str | Path, recursive: bool = False) -> List[Path]:
    return find_files(directory, RULES_EXTENSION, recursive)


def expand_rules_paths(paths: Sequence[str | Path]) -> List[Path]:
    """Replace each directory in a list of rulebase paths by its `.rules` files."""
    expanded: List[Path] = []
    for path in map(Path, paths):
        expanded.extend(find_rules_files(path) if path.is_dir() else [path])
    return expanded


def read_text(file_path: str | Path, what: str = 'file') -> str:
    """
    Read a UTF-8 source file.

    Args:
        file_path: Path to the file
        what: Kind of file, used in the error message

    Raises:
        InputError: when the file cannot be read or is not valid UTF-8
    """
    try:
        return Path(file_path).read_text(encoding='utf-8')
    except UnicodeDecodeError as error:
        raise InputError(f"cannot read {what}: not valid UTF-8 at byte {error.start}",
                         str(file_path)) from error
    except OSError as error:
        raise InputError(f"cannot read {what}: {error.strerror or error}", str(file_path)) from error
