import json
import os
from pathlib import Path

from pydantic import ValidationError

from src.data_models.results import AdeReport


class ResultHandlerError(Exception):
    """Exception raised for errors in result handling."""

    pass


class ResultSaver:
    """Saves and loads ADE reports."""

    @staticmethod
    def save_to_json(result_data: dict, output_dir: str, file_name: str, suffix: str = "ade") -> str:
        """Save a report to a JSON file.

        Args:
            result_data: The data to save as a dictionary
            output_dir: The directory to save the result to
            file_name: The input file name the output name is derived from
            suffix: Optional suffix to add to the output file name

        Returns:
            The path to the saved file

        Raises:
            ResultHandlerError: If saving fails
        """
        file_name_stem = Path(file_name).stem
        output_file = os.path.join(output_dir, f"{file_name_stem}_{suffix}.json")

        try:
            Path(output_dir).mkdir(parents=True, exist_ok=True)
            with open(output_file, "w", encoding="utf-8") as f:
                json.dump(result_data, f, indent=2, sort_keys=True, ensure_ascii=False)
            return output_file
        except Exception as e:
            raise ResultHandlerError(f"Failed to save result to JSON: {str(e)}")

    @staticmethod
    def save_text_file(content: str, output_dir: str, file_name: str, suffix: str, extension: str) -> str:
        """Save text content to a file.

        Args:
            content: The text content to save
            output_dir: The directory to save the result to
            file_name: The input file name the output name is derived from
            suffix: Suffix to add to the output file name
            extension: File extension to use

        Returns:
            The path to the saved file

        Raises:
            ResultHandlerError: If saving fails
        """
        file_name_stem = Path(file_name).stem
        output_file = os.path.join(output_dir, f"{file_name_stem}_{suffix}.{extension}")

        try:
            Path(output_dir).mkdir(parents=True, exist_ok=True)
            with open(output_file, "w", encoding="utf-8") as f:
                f.write(content if content.endswith("\n") else content + "\n")
            return output_file
        except Exception as e:
            raise ResultHandlerError(f"Failed to save text file: {str(e)}")

    @staticmethod
    def save_ade(file_name: str, report: AdeReport, output_dir: str, latex: str = "") -> list[str]:
        """Save the JSON report, the ascii equation and optionally its LaTeX form.

        Returns:
            The paths written
        """
        saved = [ResultSaver.save_to_json(report.model_dump(mode="json"), output_dir, file_name)]
        if report.poly is not None:
            saved.append(
                ResultSaver.save_text_file(report.poly, output_dir, file_name, suffix="ade", extension="txt")
            )
        if latex:
            saved.append(ResultSaver.save_text_file(latex, output_dir, file_name, suffix="ade", extension="tex"))
        return saved

    @staticmethod
    def load_report(path: str) -> AdeReport:
        """Load a JSON report written by save_ade.

        Raises:
            ResultHandlerError: If the file cannot be read or is not a report
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                return AdeReport.model_validate(json.load(f))
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            raise ResultHandlerError(f"Failed to load report from {path}: {str(e)}")
