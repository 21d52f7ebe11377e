from src.frontend.parser import parse_system
from src.frontend.printer import emit_json, print_ade

__all__ = ["emit_json", "parse_system", "print_ade"]
