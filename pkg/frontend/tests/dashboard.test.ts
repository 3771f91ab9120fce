import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { loadTeacherDashboard, renderCohortView, renderTeacherDashboard } from "../src/dashboard";
import { fixture, mockFetch } from "./helpers";

function container(): HTMLElement {
  document.body.innerHTML = "<main id='app'></main>";
  return document.getElementById("app")!;
}

const finalPayload = fixture("result_final").body.payload;
const studentPayload = fixture("result_student").body.payload;
const selfPayload = fixture("result_self").body.payload;

describe("teacher dashboard", () => {
  it("renders exactly the four recorded source values, ending in Very Good", () => {
    const root = container();
    renderTeacherDashboard(root, {
      teacherId: "t1",
      campaignId: "camp-1",
      final: finalPayload,
      student: studentPayload,
      self: selfPayload,
    });
    const rows = [...root.querySelectorAll("tr.source-row")].map((row) =>
      [...row.querySelectorAll("td")].map((td) => td.textContent));
    expect(rows).toEqual([
      ["1", "Fellow-like evaluation", "Very Good", "-"],
      ["2", "Chief of staff's evaluation", "-", finalPayload.chief_score.toFixed(2)],
      ["3", "Student's evaluation", "-", finalPayload.student_score.toFixed(2)],
      ["4", "Self evaluation", "-", finalPayload.self_score.toFixed(2)],
    ]);
    // the recorded golden payload: 4.50 / 4.11 / 4.20
    expect(rows[1]![3]).toBe("4.50");
    expect(rows[2]![3]).toBe("4.11");
    expect(rows[3]![3]).toBe("4.20");
    const finalRow = root.querySelector('[data-testid="final-row"]')!;
    expect(finalRow.textContent).toContain("FINAL RESULT");
    expect(finalRow.textContent).toContain("Very Good");
    expect(finalRow.textContent).toContain(finalPayload.final_score.toFixed(4));
  });

  it("draws per-competency bars straight from the payload", () => {
    const root = container();
    renderTeacherDashboard(root, {
      teacherId: "t1",
      campaignId: "camp-1",
      final: finalPayload,
      student: studentPayload,
      self: null,
    });
    const bar = root.querySelector<HTMLElement>('[data-competency="scientific"]')!;
    const value = studentPayload.per_competency.scientific;
    expect(bar.querySelector(".bar-value")!.textContent).toBe(value.toFixed(2));
    expect((bar.querySelector(".bar-fill") as HTMLElement).style.width)
      .toBe(`${(value / 5) * 100}%`);
  });

  it("loads the three payloads over the API and renders them", async () => {
    mockFetch([
      { method: "GET", pattern: /\/results\/t1\/camp-1\/final$/, reply: "result_final" },
      { method: "GET", pattern: /\/results\/t1\/camp-1\/student$/, reply: "result_student" },
      { method: "GET", pattern: /\/results\/t1\/camp-1\/self$/, reply: "result_self" },
    ]);
    const root = container();
    await loadTeacherDashboard(new ApiClient(), root, "t1", "camp-1");
    expect(root.querySelector('[data-testid="final-table"]')).not.toBeNull();
    expect(root.textContent).toContain("Very Good");
  });

  it("renders the access-denied view on a 403", async () => {
    mockFetch([
      { method: "GET", pattern: /\/results\/t1\/camp-1\/final$/, reply: "result_denied" },
    ]);
    const root = container();
    await loadTeacherDashboard(new ApiClient(), root, "t1", "camp-1");
    const denied = root.querySelector('[data-testid="access-denied"]');
    expect(denied).not.toBeNull();
    expect(denied!.textContent).toContain("confidential");
    expect(root.querySelector('[data-testid="final-table"]')).toBeNull();
  });
});

describe("cohort view", () => {
  it("prints the anonymized between-min-and-max lines", () => {
    const root = container();
    renderCohortView(root, fixture("statistics").body);
    const scientific = root.querySelector('[data-competency="scientific"]')!;
    expect(scientific.textContent).toContain("between 3.80 and 4.20");
    expect(root.textContent).toContain("3 teacher(s), no identities shown.");
    expect(root.textContent).not.toContain("t1");
  });
});
