import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { renderCollegialScreen } from "../src/collegial";
import { fixture, flush, jsonResponse, mockFetch } from "./helpers";

function container(): HTMLElement {
  document.body.innerHTML = "<main id='app'></main>";
  return document.getElementById("app")!;
}

function render(recordName: string, routes: Parameters<typeof mockFetch>[0] = []) {
  mockFetch(routes);
  const root = container();
  renderCollegialScreen({
    container: root,
    client: new ApiClient(),
    record: fixture(recordName).body,
  });
  return root;
}

describe("collegial stepper", () => {
  it("starts in pre-observation with consent capture", () => {
    const root = render("collegial_created");
    const steps = [...root.querySelectorAll(".stepper li")];
    expect(steps.map((step) => step.textContent)).toEqual([
      "Pre-observation", "Observation", "Post-observation", "Complete",
    ]);
    expect(steps[0]!.className).toBe("current");
    expect(root.querySelector('[data-testid="consent-evaluated"]')).not.toBeNull();
    expect(root.querySelector('[data-testid="consent-evaluator"]')).not.toBeNull();
    expect(root.querySelector('[data-testid="decline-evaluator"]')).not.toBeNull();
    // no marks before the observation phase
    expect(root.querySelector('[data-testid="marks"]')).toBeNull();
  });

  it("advances through the phases as the API confirms them", async () => {
    const root = render("collegial_consented", [
      { method: "POST", pattern: /\/advance$/, reply: "collegial_observation" },
    ]);
    const notes = root.querySelector<HTMLTextAreaElement>('[data-testid="notes"]')!;
    notes.value = "agreed on the lesson and the schedule";
    root.querySelector<HTMLButtonElement>('[data-testid="advance"]')!.click();
    await flush();
    const current = root.querySelector(".stepper li.current")!;
    expect((current as HTMLElement).dataset.phase).toBe("observation");
    expect(root.querySelector('[data-testid="marks"]')).not.toBeNull();
  });

  it("shows API rejections inline without moving the stepper", async () => {
    const root = render("collegial_consented", [
      {
        method: "POST",
        pattern: /\/advance$/,
        reply: () => jsonResponse(422, { code: "EmptyNotes", detail: "notes are required" }),
      },
    ]);
    root.querySelector<HTMLButtonElement>('[data-testid="advance"]')!.click();
    await flush();
    expect(root.querySelector('[data-testid="error"]')!.textContent)
      .toContain("EmptyNotes");
    expect((root.querySelector(".stepper li.current") as HTMLElement).dataset.phase)
      .toBe("pre_observation");
  });

  it("prefills recorded marks and completes with the server-computed result", async () => {
    const root = render("collegial_marked", [
      { method: "POST", pattern: /\/advance$/, reply: "collegial_complete" },
    ]);
    const clarity = root.querySelector<HTMLSelectElement>('[data-criterion="lesson_clarity"]')!;
    expect(clarity.value).toBe("good");
    const notes = root.querySelector<HTMLTextAreaElement>('[data-testid="notes"]')!;
    notes.value = "discussed conclusions and improvement ideas";
    root.querySelector<HTMLButtonElement>('[data-testid="advance"]')!.click();
    await flush();
    const result = root.querySelector('[data-testid="result"]')!;
    // (VG, VG, G, G) banded by the server -> Good; rendered verbatim
    expect(result.textContent).toBe("Result: Good");
    expect(root.querySelector('[data-testid="advance"]')).toBeNull();
    const doneSteps = root.querySelectorAll(".stepper li.done");
    expect(doneSteps).toHaveLength(3);
  });

  it("renders voided records read-only", () => {
    const voided = { ...fixture("collegial_created").body, voided: true };
    mockFetch([]);
    const root = container();
    renderCollegialScreen({ container: root, client: new ApiClient(), record: voided });
    expect(root.querySelector('[data-testid="voided"]')).not.toBeNull();
    expect(root.querySelector('[data-testid="advance"]')).toBeNull();
    expect(root.querySelector('[data-testid="consent-evaluated"]')).toBeNull();
  });
});
