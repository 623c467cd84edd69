"""
Utility module for loading the group catalog from JSON configuration.
"""
import json
import os
from typing import Any, Dict, List, Optional

from config.config_loader import get_catalog_path
from config.logger_config import get_logger

logger = get_logger("diff_invariants.config")

REQUIRED_FIELDS = ("name", "sampler", "p")


class GroupCatalogLoader:
    """Loads group entries (generators, sampler, p, relation) from a JSON catalog."""

    def __init__(self, catalog_path: Optional[str] = None):
        """Initialize the catalog loader.

        Args:
            catalog_path: Path to the JSON catalog. If None, uses the configured
                catalog.path or config/group_catalog.json next to this file.
        """
        if catalog_path is None:
            catalog_path = get_catalog_path()
        if catalog_path is None:
            current_dir = os.path.dirname(os.path.abspath(__file__))
            catalog_path = os.path.join(current_dir, 'group_catalog.json')

        self.catalog_path = catalog_path
        self.entries_by_name: Dict[str, Dict[str, Any]] = {}
        self._load_entries()

    def _load_entries(self):
        """Load group entries from the JSON file.

        Raises:
            FileNotFoundError: The catalog file does not exist
            ValueError: Malformed JSON or an entry missing a required field
        """
        try:
            with open(self.catalog_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Group catalog not found: {self.catalog_path}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in group catalog {self.catalog_path}: {e}")

        for entry in data.get('groups', []):
            missing = [key for key in REQUIRED_FIELDS if not entry.get(key)]
            if missing:
                raise ValueError(f"catalog entry {entry.get('name', '?')!r} lacks {', '.join(missing)}")
            self.entries_by_name[entry['name']] = entry
        logger.debug("loaded %d groups from %s", len(self.entries_by_name), self.catalog_path)

    def names(self) -> List[str]:
        return list(self.entries_by_name)

    def get_entry(self, name: str) -> Optional[Dict[str, Any]]:
        """Raw catalog entry for a group name, or None if absent."""
        return self.entries_by_name.get(name)
