"""
Config Lexer and Parser

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

Tokenizes and parses construction config files:

    # comment
    base = exp
    sigma = 1:2, 2:1, 3:inf
    theta.3 = 1/20

Each line is `key = value`; the value is the raw text up to a comment or
the end of the line. Typing happens in ConstructionConfig.
"""

from dataclasses import dataclass
from enum import Enum, auto
from typing import Any, Dict, List, Optional

from ..core.errors import MahlerError


class TokenType(Enum):
    """Token types for the config lexer."""
    KEY = auto()
    EQUALS = auto()
    VALUE = auto()
    NEWLINE = auto()
    COMMENT = auto()
    EOF = auto()
    UNKNOWN = auto()


@dataclass
class Token:
    """A single token from the lexer."""
    type: TokenType
    value: Any
    line: int
    column: int


class ConfigError(MahlerError):
    """Config error with a source location (line 0 when not tied to a line)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(message)

    def __str__(self) -> str:
        if self.line:
            return f"Line {self.line}, Column {self.column}: {self.message}"
        return self.message


class ConfigLexer:
    """Lexer for key = value config text."""

    KEY_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-")

    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1
        self.tokens: List[Token] = []
        self._after_equals = False

    def tokenize(self) -> List[Token]:
        """Tokenize the entire source and return list of tokens."""
        self.tokens = []
        while self.pos < len(self.source):
            token = self._next_token()
            if token and token.type != TokenType.COMMENT:
                self.tokens.append(token)
        self.tokens.append(Token(TokenType.EOF, None, self.line, self.column))
        return self.tokens

    def _next_token(self) -> Optional[Token]:
        self._skip_whitespace()
        if self.pos >= len(self.source):
            return None

        start_line = self.line
        start_col = self.column
        char = self.source[self.pos]

        if char == "#":
            return self._read_comment(start_line, start_col)
        if char == "\n":
            self._advance()
            self._after_equals = False
            return Token(TokenType.NEWLINE, "\n", start_line, start_col)
        if self._after_equals:
            return self._read_value(start_line, start_col)
        if char == "=":
            self._advance()
            self._after_equals = True
            return Token(TokenType.EQUALS, "=", start_line, start_col)
        if char in self.KEY_CHARS:
            return self._read_key(start_line, start_col)

        self._advance()
        return Token(TokenType.UNKNOWN, char, start_line, start_col)

    def _skip_whitespace(self) -> None:
        while self.pos < len(self.source) and self.source[self.pos] in (" ", "\t", "\r"):
            self._advance()

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.pos < len(self.source):
                if self.source[self.pos] == "\n":
                    self.line += 1
                    self.column = 1
                else:
                    self.column += 1
                self.pos += 1

    def _read_comment(self, line: int, col: int) -> Token:
        start = self.pos
        while self.pos < len(self.source) and self.source[self.pos] != "\n":
            self._advance()
        return Token(TokenType.COMMENT, self.source[start:self.pos], line, col)

    def _read_key(self, line: int, col: int) -> Token:
        start = self.pos
        while self.pos < len(self.source) and self.source[self.pos] in self.KEY_CHARS:
            self._advance()
        return Token(TokenType.KEY, self.source[start:self.pos], line, col)

    def _read_value(self, line: int, col: int) -> Token:
        start = self.pos
        while self.pos < len(self.source) and self.source[self.pos] not in ("\n", "#"):
            self._advance()
        self._after_equals = False
        return Token(TokenType.VALUE, self.source[start:self.pos].strip(), line, col)


@dataclass
class ConfigEntry:
    """One `key = value` line."""
    key: str
    value: str
    line: int
    column: int

    def error(self, message: str) -> ConfigError:
        return ConfigError(f"{self.key}: {message}", self.line, self.column)


class ConfigParser:
    """Parser for config tokens."""

    def __init__(self):
        self.tokens: List[Token] = []
        self.pos = 0
        self.current_token: Optional[Token] = None

    def parse(self, source: str) -> Dict[str, ConfigEntry]:
        """
        Parse config text into entries keyed by name.

        Raises:
            ConfigError: on malformed lines or duplicate keys
        """
        self.tokens = ConfigLexer(source).tokenize()
        self.pos = 0
        self.current_token = self.tokens[0]
        entries: Dict[str, ConfigEntry] = {}

        while not self._is_at_end():
            if self._check(TokenType.NEWLINE):
                self._advance()
                continue
            entry = self._parse_entry()
            if entry.key in entries:
                first = entries[entry.key]
                raise ConfigError(
                    f"Duplicate key '{entry.key}' (first set on line {first.line})",
                    entry.line, entry.column,
                )
            entries[entry.key] = entry
        return entries

    def _is_at_end(self) -> bool:
        return self.current_token is None or self.current_token.type == TokenType.EOF

    def _check(self, token_type: TokenType) -> bool:
        if self._is_at_end():
            return False
        return self.current_token.type == token_type

    def _advance(self) -> Optional[Token]:
        token = self.current_token
        self.pos += 1
        self.current_token = self.tokens[self.pos] if self.pos < len(self.tokens) else None
        return token

    def _expect(self, token_type: TokenType, message: str) -> Token:
        if not self._check(token_type):
            token = self.current_token
            raise ConfigError(message, token.line if token else 0, token.column if token else 0)
        return self._advance()

    def _parse_entry(self) -> ConfigEntry:
        key = self._expect(TokenType.KEY, "Expected a key")
        self._expect(TokenType.EQUALS, f"Expected '=' after '{key.value}'")
        value = self._expect(TokenType.VALUE, f"Missing value for '{key.value}'")
        if not value.value:
            raise ConfigError(f"Missing value for '{key.value}'", value.line, value.column)
        if not self._is_at_end():
            self._expect(TokenType.NEWLINE, "Expected end of line")
        return ConfigEntry(key.value, value.value, key.line, key.column)
