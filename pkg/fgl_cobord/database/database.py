import json
import sqlite3
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from fgl_cobord.utils.logging import logger


class PresentationStore:
    """SQLite table of serialized Lazard presentations keyed by truncation weight"""

    def __init__(self, db_path: str | Path):
        self.db_path = Path(db_path)
        if self.db_path.is_dir():
            self.db_path = self.db_path / "presentations.db"
        logger.info(f"Presentation store: {self.db_path}")
        self.init_db()

    def init_db(self):
        """Create the presentations table"""
        conn = sqlite3.connect(self.db_path)
        try:
            cursor = conn.cursor()
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS presentations (
                    max_weight INTEGER PRIMARY KEY,
                    schema TEXT NOT NULL,
                    state TEXT NOT NULL,
                    created_at TEXT
                )
            """)
            conn.commit()
        except sqlite3.Error as e:
            logger.error(f"Database initialization error: {e}")
            raise
        finally:
            conn.close()

    def load(self, max_weight: int) -> Optional[Dict]:
        """Stored state for N, or None"""
        conn = sqlite3.connect(self.db_path)
        try:
            cursor = conn.cursor()
            cursor.execute("SELECT state FROM presentations WHERE max_weight = ?", (max_weight,))
            row = cursor.fetchone()
            return json.loads(row[0]) if row else None
        except (sqlite3.Error, ValueError) as e:
            logger.error(f"Error loading presentation N={max_weight}: {e}")
            return None
        finally:
            conn.close()

    def save(self, state: Dict) -> bool:
        conn = sqlite3.connect(self.db_path)
        try:
            cursor = conn.cursor()
            cursor.execute(
                "INSERT OR REPLACE INTO presentations (max_weight, schema, state, created_at) VALUES (?, ?, ?, ?)",
                (state["max_weight"], state.get("schema", ""), json.dumps(state), datetime.now().isoformat()),
            )
            conn.commit()
            return True
        except sqlite3.Error as e:
            logger.error(f"Error saving presentation N={state.get('max_weight')}: {e}")
            return False
        finally:
            conn.close()

    def delete(self, max_weight: int) -> bool:
        conn = sqlite3.connect(self.db_path)
        try:
            cursor = conn.cursor()
            cursor.execute("DELETE FROM presentations WHERE max_weight = ?", (max_weight,))
            conn.commit()
            return cursor.rowcount > 0
        except sqlite3.Error as e:
            logger.error(f"Error deleting presentation N={max_weight}: {e}")
            return False
        finally:
            conn.close()

    def stored_weights(self) -> List[int]:
        conn = sqlite3.connect(self.db_path)
        try:
            cursor = conn.cursor()
            cursor.execute("SELECT max_weight FROM presentations ORDER BY max_weight")
            return [row[0] for row in cursor.fetchall()]
        except sqlite3.Error as e:
            logger.error(f"Error listing presentations: {e}")
            return []
        finally:
            conn.close()
