"""Websocket service: live engine loop plus state broadcasts.

Clients send {"type": "note_on"|"note_off", "player": "A"|"B", "note": n,
"velocity": v}; the server answers every connection and every engine change
with a full state snapshot.  All quantum and tonal math stays here -- the
browser console only renders what it is told.
"""

from __future__ import annotations

import asyncio
import json
import math
from contextlib import asynccontextmanager, suppress

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from qduet.engine import PORTS, Engine, EngineConfig
from qduet.midi import MidiEvent, NoteOff, NoteOn, normalize_note_off


def parse_client_message(raw: str) -> tuple[str, MidiEvent]:
    """Validate one client text frame into (player, event); raises ValueError."""
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ValueError("message must be a JSON object")
    kind = obj.get("type")
    if kind not in ("note_on", "note_off"):
        raise ValueError(f"unknown message type: {kind!r}")
    player = obj.get("player")
    if player not in PORTS:
        raise ValueError(f"player must be 'A' or 'B', got {player!r}")
    note = obj.get("note")
    if not isinstance(note, int) or isinstance(note, bool) or not 0 <= note <= 127:
        raise ValueError(f"note must be an integer in [0, 127], got {note!r}")
    velocity = obj.get("velocity", 100 if kind == "note_on" else 0)
    if not isinstance(velocity, int) or isinstance(velocity, bool) or not 0 <= velocity <= 127:
        raise ValueError(f"velocity must be an integer in [0, 127], got {velocity!r}")
    event = NoteOn(0, note, velocity) if kind == "note_on" else NoteOff(0, note, velocity)
    return player, normalize_note_off(event)


class LiveSession:
    """One engine, one tick loop, any number of websocket observers."""

    def __init__(self, config: EngineConfig, tick_ms: int | None = None):
        self.engine = Engine(config)
        self.tick_ms = tick_ms if tick_ms is not None else config.ramp_tick_ms
        self.queue: asyncio.Queue[tuple[str, MidiEvent]] = asyncio.Queue()
        self.clients: set[WebSocket] = set()
        self.now_ms = 0

    def snapshot(self) -> dict:
        engine = self.engine
        half = math.pi * engine.last_s / 2.0
        return {
            "type": "state",
            "t_ms": self.now_ms,
            "s": engine.last_s,
            "phi_plus_weight": math.cos(half) ** 2,
            "psi_plus_weight": math.sin(half) ** 2,
            "shots": [[b0, b1] for b0, b1 in engine.last_shots],
            "cc": dict(engine.current_cc),
            "target_cc": dict(engine.target_cc),
            "avg": {p: engine.windows[p].average() for p in PORTS},
        }

    async def broadcast(self) -> None:
        message = self.snapshot()
        dead = []
        for ws in self.clients:
            try:
                await ws.send_json(message)
            except Exception:
                dead.append(ws)
        for ws in dead:
            self.clients.discard(ws)

    async def run(self) -> None:
        """Tick loop: drain inputs, step the engine, broadcast on any change.

        Broadcasts are naturally throttled to at most one per ramp tick
        because input handling and stepping share the tick.
        """
        while True:
            changed = False
            while not self.queue.empty():
                port, event = self.queue.get_nowait()
                self.engine.on_midi_in(port, event, self.now_ms)
                changed = True
            sims_before = self.engine.sim_count
            frame = self.engine.step(self.now_ms)
            if changed or frame.events or self.engine.sim_count != sims_before:
                await self.broadcast()
            self.now_ms += self.tick_ms
            await asyncio.sleep(self.tick_ms / 1000.0)


def create_app(config: EngineConfig, ui_dir: str | None = None,
               tick_ms: int | None = None) -> FastAPI:
    session = LiveSession(config, tick_ms)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(session.run())
        yield
        task.cancel()
        with suppress(asyncio.CancelledError):
            await task

    app = FastAPI(lifespan=lifespan)
    app.state.session = session

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        session.clients.add(ws)
        try:
            await ws.send_json(session.snapshot())
            while True:
                raw = await ws.receive_text()
                try:
                    player, event = parse_client_message(raw)
                except ValueError as exc:
                    await ws.send_json({"type": "error", "message": str(exc)})
                    continue
                session.queue.put_nowait((player, event))
        except WebSocketDisconnect:
            pass
        finally:
            session.clients.discard(ws)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
