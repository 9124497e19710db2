import { describe, expect, it, vi } from "vitest";

import type { ApiClient, SessionEventBody } from "../src/api.js";
import { EventQueue } from "../src/events.js";

function makeApi(postEvents: (documentId: string, events: SessionEventBody[]) => Promise<void>) {
  return { postEvents } as unknown as ApiClient;
}

describe("EventQueue", () => {
  it("queues events with non-decreasing timestamps", () => {
    const q = new EventQueue(makeApi(async () => undefined), "d1");
    const spy = vi.spyOn(Date, "now");
    spy.mockReturnValueOnce(1000);
    q.emit("editor_focus");
    spy.mockReturnValueOnce(900); // clock went backwards
    q.emit("persona_created", { persona_id: "p1" });
    spy.mockRestore();
    expect(q.pending).toBe(2);
  });

  it("suppresses duplicate focus events", () => {
    const q = new EventQueue(makeApi(async () => undefined), "d1");
    q.emit("editor_focus");
    q.emit("editor_focus");
    expect(q.pending).toBe(1);
    q.emit("sidebar_focus");
    q.emit("editor_focus");
    expect(q.pending).toBe(3);
  });

  it("flushes the batch in order and empties the queue", async () => {
    const batches: SessionEventBody[][] = [];
    const q = new EventQueue(
      makeApi(async (_doc, events) => {
        batches.push(events);
      }),
      "d1",
    );
    q.emit("editor_focus");
    q.emit("sidebar_focus");
    await q.flush();
    expect(q.pending).toBe(0);
    expect(batches).toHaveLength(1);
    expect(batches[0].map((e) => e.kind)).toEqual(["editor_focus", "sidebar_focus"]);
    const ts = batches[0].map((e) => e.timestamp_ms);
    expect(ts[0]).toBeLessThanOrEqual(ts[1]);
  });

  it("re-queues the batch when the flush fails", async () => {
    let calls = 0;
    const q = new EventQueue(
      makeApi(async () => {
        calls += 1;
        if (calls === 1) {
          throw new Error("network down");
        }
      }),
      "d1",
    );
    q.emit("editor_focus");
    await expect(q.flush()).rejects.toThrow("network down");
    expect(q.pending).toBe(1);
    await q.flush();
    expect(q.pending).toBe(0);
    expect(calls).toBe(2);
  });
});
