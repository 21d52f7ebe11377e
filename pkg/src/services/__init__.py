from src.services.result_handler import ResultHandlerError, ResultSaver

__all__ = ["ResultHandlerError", "ResultSaver"]
